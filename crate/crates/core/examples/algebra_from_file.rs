//! Load a group-definition file, multiply group elements through the BCH formula.
//!
//! cargo run --example algebra_from_file -- crates/core/data/filiform4.group

use nilweyl::exact::{format_q, qfrac};
use nilweyl::liecore::{bracket, parse_group_definition, AlgebraElement, GroupElement};

fn main() -> nilweyl::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/filiform4.group").to_string()
    });
    let text = std::fs::read_to_string(&path)?;
    let g = parse_group_definition(&text)?;
    println!("{}: dim {}, class {}", g.name(), g.dim(), g.class());
    for (i, j, k, c) in g.nonzero_brackets() {
        let l = g.labels();
        println!("  [{}, {}] = {} {}", l[i], l[j], format_q(&c), l[k]);
    }

    let n = g.dim();
    let x = AlgebraElement::basis(&g, n - 1);
    let y = AlgebraElement::basis(&g, n - 2).scale(&qfrac(1, 2));
    println!("[x, y] = {:?}", bracket(&x, &y)?);

    // exp(x) exp(y) = exp(x + y + [x,y]/2 + ...), exact for nilpotent g
    let p = GroupElement::exp(&x).multiply(&GroupElement::exp(&y))?;
    println!(
        "log(exp x exp y) = {:?}",
        p.log_coords().iter().map(format_q).collect::<Vec<_>>()
    );
    let back = p.multiply(&p.inverse())?;
    assert!(back.is_identity());
    Ok(())
}
