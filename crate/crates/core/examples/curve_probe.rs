extern crate superrad as _;
use superrad::analysis::fit_peak_scaling;
use superrad::hamiltonian::*;
use superrad::lindblad::{default_step, dicke_intensity_series};
use superrad::observables::ObservableEngine;
use superrad::state::{evolve, init_state, TrotterPlan};

fn alloc(n_atoms: usize, m: usize) -> Vec<usize> {
    if n_atoms <= 3 { return vec![1; m]; }
    if n_atoms == 4 { let mut q = vec![1; m]; q[m / 2] = 2; return q; }
    let mut q = vec![2; m]; q[0] = 1; q[m - 1] = 1; q
}

fn main() {
    let gamma0 = 2.0;
    let width = 15.0;
    let mut sim_peaks = Vec::new();
    let mut orc_peaks = Vec::new();
    for n_atoms in 2..=6usize {
        let qubits = alloc(n_atoms, 7);
        let freqs = standard_mode_window(100.0, width, 7).unwrap();
        let delta = width / 6.0;
        let g = coupling_from_gamma(gamma0, delta, CouplingConvention::G2OverDelta).unwrap();
        let atoms = vec![AtomSpec { frequency: 100.0, position: 0.0, gamma0 }; n_atoms];
        let modes: Vec<ModeSpec> =
            freqs.iter().zip(&qubits).map(|(&f, &qk)| ModeSpec::resonant(f, g, qk)).collect();
        let spec = SystemSpec::new(atoms, modes, 24).unwrap();
        let parts = build_total(&spec).unwrap();
        let plan = TrotterPlan::new(&parts, 3.0 / gamma0, 1600).unwrap();
        let mut engine = ObservableEngine::new(&spec, &parts.total).unwrap();
        let mut s = init_state(&spec.layout);
        let mut peak = 0.0f64;
        let mut t80 = -1.0f64;
        let mut end = 0.0;
        let mut maxc = 0.0f64;
        evolve(&mut s, &plan, 8, |t, st| {
            let rec = engine.record(t, st);
            if rec.intensity > peak { peak = rec.intensity; }
            if t80 < 0.0 && rec.n_total >= 0.8 * n_atoms as f64 { t80 = rec.time; }
            end = rec.n_total / n_atoms as f64;
            maxc = maxc.max(rec.n_modes[3]);
            Ok(())
        }).unwrap();
        let (oracle, _) = dicke_intensity_series(n_atoms, gamma0, 3.0 / gamma0, default_step(gamma0)).unwrap();
        let ov = oracle.max_point().1;
        println!("N={n_atoms} q={qubits:?}: peak {:.3} oracle {:.3} ratio {:.3} | t80 {:.3} | ntot(3)/N {:.3} | maxcenter {:.2}",
            peak, ov, peak / ov, t80, end, maxc);
        sim_peaks.push((n_atoms as f64, peak));
        orc_peaks.push((n_atoms as f64, ov));
    }
    let fs = fit_peak_scaling(&sim_peaks).unwrap();
    let fo = fit_peak_scaling(&orc_peaks).unwrap();
    println!("sim exponent {:.3}, oracle exponent {:.3}", fs.exponent, fo.exponent);
}
