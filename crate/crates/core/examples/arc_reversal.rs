//! Reverses Y -> X on a two-node diagram and prints the bounds of both new
//! tables next to what Bayes' rule gives at the extreme members.

use iid::transforms::reverse_arc;
use iid::DiagramSpec;

fn main() -> iid::Result<()> {
    let diagram = DiagramSpec::new()
        .chance("Y", &["y1", "y2"], &[], vec![vec![0.3, 0.5]])
        .chance("X", &["x1", "x2"], &["Y"], vec![vec![0.6, 0.3], vec![0.2, 0.7]])
        .value("V", &["X", "Y"], vec![(1.0, 1.0); 4])
        .build()?;
    let (y, x) = (diagram.id("Y")?, diagram.id("X")?);
    let t = reverse_arc(&diagram, y, x)?;
    println!("step: {}", t.step.kind);
    for note in &t.step.notes {
        println!("note: {:?}", note);
    }
    let out = &t.diagram;
    for id in [x, y] {
        let node = out.node(id);
        let space = out.parent_space(id);
        let parents: Vec<&str> = space.parents().iter().map(|&p| out.name(p)).collect();
        println!("{} given ({}):", node.name, parents.join(", "));
        for (r, row) in out.cpt(id).expect("chance node").rows().iter().enumerate() {
            let bounds: Vec<String> = (0..row.len())
                .map(|o| format!("{}: [{:.4}, {:.4}]", node.outcomes[o], row[o], iid::model::implied_upper(row, o)))
                .collect();
            println!("  row {}  {}", r, bounds.join("  "));
        }
    }
    Ok(())
}
