//! Ambiguity functions and cross-Wigner distributions on the orbit of heis3: Moyal
//! identity, isometry for a unit window, and the rank-one law.

use nilweyl::liecore::{Functional, NilpotentAlgebra};
use nilweyl::orbit::OrbitData;
use nilweyl::repgrid::{gaussian_window, GridOperator, SchrodingerRep, TildeRep};
use nilweyl::wpcalc::{ambiguity, moyal_identity, quantize, random_gaussian_vector, wigner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nilweyl::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let orbit = OrbitData::new(&Functional::dual_basis(&NilpotentAlgebra::heisenberg(), 0))?;
    let rep = TildeRep::balanced(&orbit, 64)?;

    let [f1, p1, f2, p2] = [(); 4].map(|_| random_gaussian_vector(&rep, &mut rng));
    let (lhs, rhs) = moyal_identity(&f1, &p1, &f2, &p2, &rep)?;
    println!("(A f1|A f2) = {lhs:.12}\n(f1|f2)(p2|p1) = {rhs:.12}");

    let phi0 = gaussian_window(&rep, 1.0)?;
    let a = ambiguity(&f1, phi0.function(), &rep)?;
    println!("|A f| / |f| = {:.15}", a.norm() / f1.norm());

    // Op(W(f, φ)) = (·|φ) f; random pairs need the wider Schrödinger predual box
    let s = SchrodingerRep::balanced(128)?;
    let f = random_gaussian_vector(&s, &mut rng);
    let phi = random_gaussian_vector(&s, &mut rng);
    let op = quantize(&wigner(&f, &phi, &s)?, &s)?;
    let want = GridOperator::rank_one(&f, &phi)?;
    println!(
        "rank-one law, operator-norm error {:.2e}",
        op.sub(&want)?.op_norm() / want.op_norm()
    );
    Ok(())
}
