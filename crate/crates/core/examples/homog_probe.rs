extern crate superrad as _;
use superrad::hamiltonian::*;
use superrad::lindblad::{default_step, dicke_intensity_series};
use superrad::observables::ObservableEngine;
use superrad::state::{evolve, init_state, TrotterPlan};

fn run(width: f64, gamma0: f64, centre_q: usize) {
    println!("--- window width {width}, gamma0 {gamma0}, centre q {centre_q} (t_rev = {:.2} lifetimes)",
        2.0 * std::f64::consts::PI * gamma0 / (width / 6.0));
    for n_atoms in 2..=6usize {
        let freqs = standard_mode_window(100.0, width, 7).unwrap();
        let delta = width / 6.0;
        let g = coupling_from_gamma(gamma0, delta, CouplingConvention::G2OverDelta).unwrap();
        let atoms = vec![AtomSpec { frequency: 100.0, position: 0.0, gamma0 }; n_atoms];
        let mut q = vec![1usize; 7];
        if n_atoms >= 4 { q[3] = centre_q; }
        let modes: Vec<ModeSpec> =
            freqs.iter().zip(&q).map(|(&f, &qk)| ModeSpec::resonant(f, g, qk)).collect();
        let spec = SystemSpec::new(atoms, modes, 24).unwrap();
        let parts = build_total(&spec).unwrap();
        let t_final = 3.0 / gamma0;
        let plan = TrotterPlan::new(&parts, t_final, 1600).unwrap();
        let mut engine = ObservableEngine::new(&spec, &parts.total).unwrap();
        let mut s = init_state(&spec.layout);
        let mut peak = 0.0f64; let mut peak_t = 0.0;
        let mut n_total_at_end = 0.0;
        let mut sat80 = None;
        let mut max_drift = 0.0f64;
        evolve(&mut s, &plan, 8, |t, st| {
            let rec = engine.record(t, st);
            if rec.intensity > peak { peak = rec.intensity; peak_t = rec.time; }
            if sat80.is_none() && rec.n_total >= 0.8 * n_atoms as f64 { sat80 = Some(rec.time); }
            n_total_at_end = rec.n_total;
            max_drift = max_drift.max(rec.energy_drift_rel);
            Ok(())
        }).unwrap();
        let (oracle, _) = dicke_intensity_series(n_atoms, gamma0, t_final, default_step(gamma0)).unwrap();
        let (ot, ov) = oracle.max_point();
        println!(
            "N={n_atoms}: sim pk {:.2} @ {:.2} | orc {:.2} @ {:.2} | ratio {:.3} | sat80 {:.3} | ntot(T)/N {:.4} | drift {:.4}",
            peak, peak_t, ov, ot, peak / ov, sat80.unwrap_or(-1.0), n_total_at_end / n_atoms as f64, max_drift
        );
    }
}

fn main() {
    run(21.0, 2.0, 2);
    run(24.0, 2.0, 2);
}
