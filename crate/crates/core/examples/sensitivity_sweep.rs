//! Widens every nonempty subset of three wildcatter nodes over four ranges,
//! with the exact envelope alongside.

use iid::format::parse_diagram;
use iid::render;
use iid::sensitivity::{sweep, SensitivitySpec};

fn main() -> iid::Result<()> {
    let text = std::fs::read_to_string("examples/wildcatter.iid.json").expect("fixture is readable");
    let diagram = parse_diagram(&text)?;
    let spec = SensitivitySpec::all_subsets(
        &["AMOUNT-OF-OIL", "SEISMIC-STRUCTURE", "COST-OF-DRILLING"],
        &[0.0, 0.01, 0.05, 0.10],
    )
    .with_exact(iid::exact::DEFAULT_CAP);
    let report = sweep(&diagram, &spec)?;
    print!("{}", render::sweep_report(&report));
    let broken = report.invariant_violations();
    println!("\nstructural checks: {}", if broken.is_empty() { "hold" } else { "broken" });
    for b in broken {
        println!("  {}", b);
    }
    Ok(())
}
