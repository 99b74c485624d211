//! Moyal products of windowed polynomials: q # p - p # q = i away from the window edge.

use nilweyl::repgrid::{Representation, SchrodingerRep, C64};
use nilweyl::wpcalc::{moyal_product, windowed_polynomial};

fn main() -> nilweyl::Result<()> {
    let rep = SchrodingerRep::balanced(128)?;
    let (r, tau) = (9.0, 1.0);
    let qs = windowed_polynomial(&rep, r, tau, |t| C64::new(t[0], 0.0));
    let ps = windowed_polynomial(&rep, r, tau, |t| C64::new(t[1], 0.0));
    let qp = moyal_product(&qs, &ps, &rep)?;
    let pq = moyal_product(&ps, &qs, &rep)?;
    for margin in [2.0, 3.0, 4.0, 5.0] {
        let inner = r - margin * tau;
        let mut err: f64 = 0.0;
        rep.symbol_lattice().for_each_point(|i, t| {
            if t[0].abs() <= inner && t[1].abs() <= inner {
                err = err.max((qp.values()[i] - pq.values()[i] - C64::new(0.0, 1.0)).norm());
            }
        });
        println!("|q,p| <= {inner:>4}: max |[q, p]_# - i| = {err:.2e}");
    }
    Ok(())
}
