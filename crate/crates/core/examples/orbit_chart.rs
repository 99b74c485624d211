//! Jump indices, isotropy and the polynomial graph of a few coadjoint orbits.

use nilweyl::exact::{format_q, q};
use nilweyl::liecore::{Functional, NilpotentAlgebra};
use nilweyl::orbit::OrbitData;

fn main() -> nilweyl::Result<()> {
    let cases = [
        (NilpotentAlgebra::heisenberg(), vec![q(1), q(0), q(0)]),
        (NilpotentAlgebra::filiform4(), vec![q(1), q(0), q(0), q(0)]),
        (NilpotentAlgebra::filiform4(), vec![q(0), q(1), q(0), q(0)]),
        (NilpotentAlgebra::strictly_upper(4), {
            let mut v = vec![q(0); 6];
            v[0] = q(1);
            v
        }),
        (NilpotentAlgebra::abelian(2), vec![q(3), q(-1)]),
    ];
    for (g, xi) in cases {
        let o = OrbitData::new(&Functional::new(&g, xi)?)?;
        println!(
            "{:<10} xi0 = {:?}  e = {:?}  d = {}  Pf = {}",
            g.name(),
            o.xi0().coords().iter().map(format_q).collect::<Vec<_>>(),
            o.jump_indices(),
            o.dim(),
            format_q(o.pfaffian())
        );
        for (j, p) in o.graph_polynomials() {
            println!("    xi_{j}(t) = {p:?}");
        }
        // the chart is a bijection: lift then read back
        let t: Vec<_> = (0..o.dim()).map(|k| q(k as i64 + 2)).collect();
        assert_eq!(o.chart_of(&o.lift_q(&t)), t);
    }
    Ok(())
}
