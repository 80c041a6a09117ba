//! Reads a diagram document, prints its canonical form, and shows the
//! addressed error for a malformed copy.

use iid::format::{parse_diagram, serialize_diagram};

fn main() -> iid::Result<()> {
    let text = std::fs::read_to_string("examples/chance-only.iid.json").expect("fixture is readable");
    let diagram = parse_diagram(&text)?;
    let canonical = serialize_diagram(&diagram);
    print!("{}", canonical);
    println!("byte-identical: {}", canonical == text);

    let broken = text.replace("[0.5, 0.3]", "[0.5, 0.3, 0.1]");
    match parse_diagram(&broken) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("malformed copy: {}", e),
    }
    Ok(())
}
