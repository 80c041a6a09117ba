//! Samples admitted members of each shipped fixture and checks that their
//! optimal values and choices stay inside the solved bounds.

use iid::exact::soundness_check;
use iid::format::parse_diagram;
use iid::render;

fn main() -> iid::Result<()> {
    for path in ["examples/minimal.iid.json", "examples/wildcatter-r05.iid.json"] {
        let text = std::fs::read_to_string(path).expect("fixture is readable");
        let report = soundness_check(&parse_diagram(&text)?, 1000, 7)?;
        println!("{}", path);
        print!("{}", render::soundness_report(&report));
    }
    Ok(())
}
