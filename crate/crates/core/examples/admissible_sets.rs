//! Admissible sets of the oil wildcatter at its point tables and at a 5%
//! range on three nodes.
//!
//! Run from the crate directory: `cargo run --example admissible_sets`.

use iid::format::parse_diagram;
use iid::solve;

fn show(path: &str) -> iid::Result<()> {
    let text = std::fs::read_to_string(path).expect("fixture is readable");
    let report = solve(&parse_diagram(&text)?)?;
    println!("{}: expected value {}", path, iid::render::interval(&report.final_interval));
    for set in &report.policies {
        for state in 0..set.sets.len() {
            println!("  {:<5} {:<34} {}", set.decision, set.state_label(state), set.set_label(state));
        }
    }
    Ok(())
}

fn main() -> iid::Result<()> {
    show("examples/wildcatter.iid.json")?;
    show("examples/wildcatter-r05.iid.json")
}
