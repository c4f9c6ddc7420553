extern crate superrad as _;
use superrad::hamiltonian::*;
use superrad::observables::atom_population;
use superrad::state::{evolve, init_state, TrotterPlan};

fn run(convention: CouplingConvention) -> f64 {
    let gamma0 = 2.0;
    let freqs = standard_mode_window(100.0, 30.0, 7).unwrap();
    let delta = 5.0;
    let g = coupling_from_gamma(gamma0, delta, convention).unwrap();
    let atoms = vec![AtomSpec { frequency: 100.0, position: 0.0, gamma0 }];
    let modes: Vec<ModeSpec> = freqs.iter().map(|&f| ModeSpec::resonant(f, g, 1)).collect();
    let spec = SystemSpec::new(atoms, modes, 24).unwrap();
    let parts = build_total(&spec).unwrap();
    let t_final = 2.0 / gamma0; // two lifetimes
    let plan = TrotterPlan::new(&parts, t_final, 2000).unwrap();
    let mut s = init_state(&spec.layout);
    let mut pts: Vec<(f64, f64)> = Vec::new();
    evolve(&mut s, &plan, 20, |t, st| {
        pts.push((t, atom_population(st, &spec.layout, 0)));
        Ok(())
    })
    .unwrap();
    // log-linear least squares for pop ~ e^{-Γt}
    let usable: Vec<(f64, f64)> = pts.iter().filter(|(_, p)| *p > 1e-6).cloned().collect();
    let n = usable.len() as f64;
    let (st, sy, stt, sty) = usable.iter().fold((0.0, 0.0, 0.0, 0.0), |(a, b, c, d), (t, p)| {
        (a + t, b + p.ln(), c + t * t, d + t * p.ln())
    });
    let slope = (n * sty - st * sy) / (n * stt - st * st);
    println!("convention {:?}: g = {:.5}, fitted rate = {:.4} (target {gamma0})", convention, g, -slope);
    -slope
}

fn main() {
    let good = run(CouplingConvention::G2OverDelta);
    let bad = run(CouplingConvention::G2TimesDelta);
    println!("ratio good/target = {:.3}, bad/target = {:.4}", good / 2.0, bad / 2.0);
}
