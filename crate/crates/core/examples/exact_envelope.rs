//! Compares the interval solve with the exact vertex enumeration on the
//! wildcatter widened at 5% on three nodes.

use iid::exact::{exact_envelope, EnvelopeOptions};
use iid::format::parse_diagram;
use iid::{render, solve};

fn main() -> iid::Result<()> {
    let text = std::fs::read_to_string("examples/wildcatter-r05.iid.json").expect("fixture is readable");
    let diagram = parse_diagram(&text)?;
    let varied = ["AMOUNT-OF-OIL", "SEISMIC-STRUCTURE", "COST-OF-DRILLING"]
        .iter()
        .map(|n| diagram.id(n))
        .collect::<iid::Result<Vec<_>>>()?;
    let iid = solve(&diagram)?;
    let exact = exact_envelope(&diagram, &varied, &EnvelopeOptions::default())?;
    println!("interval solve: {}", render::interval(&iid.final_interval));
    print!("{}", render::envelope_report(&exact));
    println!("\nenvelope inside interval: {}", exact.envelope.within(&iid.final_interval, 1e-9));
    Ok(())
}
