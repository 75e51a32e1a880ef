//! Hot-path benchmarks: Pauli products, frame application, Hermitian
//! exponentials, and full toggled-evolution intervals at the shipped system
//! sizes (d = 64 for the six-qubit chain, d = 256 for the eight-qubit one).

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use ddsim_core::groups::{g8_group, nested_pauli_group};
use ddsim_core::hamiltonian::{CouplingKind, HamiltonianSpec, SystemModel};
use ddsim_core::linalg::{self, CMat};
use ddsim_core::pauli::{Letter, PauliString};
use ddsim_core::propagator::{entanglement_fidelity, EvolutionConfig, EvolutionPlan};
use ddsim_core::protocols::{control_frames, ProtocolKind, ProtocolSpec};
use num_complex::Complex64 as C64;

fn random_string(rng: &mut ChaCha12Rng, n: usize) -> PauliString {
    let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    let pairs: Vec<(usize, Letter)> =
        (0..n).map(|q| (q, letters[rng.gen_range(0..4)])).collect();
    PauliString::from_letters(n, &pairs).unwrap()
}

fn dipolar(n: usize) -> SystemModel {
    let spec = HamiltonianSpec {
        n_qubits: n,
        omega: 0.0,
        detunings: vec![],
        coupling: CouplingKind::DipolarPowerLaw { exponent: 3.0 },
        anisotropy: None,
    };
    SystemModel::prepare(&spec).unwrap()
}

fn bench_pauli(c: &mut Criterion) {
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let a = random_string(&mut rng, 8);
    let b = random_string(&mut rng, 8);
    c.bench_function("pauli_mul_8q", |bench| bench.iter(|| a.mul(&b).unwrap()));
    c.bench_function("pauli_conjugate_8q", |bench| bench.iter(|| b.conjugated_by(&a).unwrap()));
}

fn bench_frame_apply(c: &mut Criterion) {
    let mut rng = ChaCha12Rng::seed_from_u64(2);
    let g = random_string(&mut rng, 8);
    let m = CMat::from_fn(256, 256, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    c.bench_function("apply_left_d256", |bench| {
        bench.iter_batched(
            || m.clone(),
            |mut work| g.apply_left(&mut work).unwrap(),
            BatchSize::LargeInput,
        )
    });
}

fn bench_linalg(c: &mut Criterion) {
    for n in [6usize, 8] {
        let sys = dipolar(n);
        let d = sys.dim;
        c.bench_function(&format!("expm_hermitian_d{d}"), |bench| {
            bench.iter(|| linalg::expm_hermitian(&sys.static_matrix, 0.05).unwrap())
        });
        let e = linalg::expm_hermitian(&sys.static_matrix, 0.05).unwrap();
        let mut out = CMat::zeros(d, d);
        c.bench_function(&format!("zgemm_d{d}"), |bench| {
            bench.iter(|| linalg::mul_into(&mut out, &e, &e))
        });
    }
}

fn bench_evolution(c: &mut Criterion) {
    let sys = dipolar(8);
    let group = g8_group();
    let cfg = EvolutionConfig::new(0.05, 8);
    let plan = EvolutionPlan::new(&sys, &cfg).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let spec = ProtocolSpec::new(ProtocolKind::Srpd, group);
    let frames = control_frames(&spec, 64, Some(&mut rng)).unwrap();
    c.bench_function("toggled_evolution_64_intervals_d256", |bench| {
        bench.iter(|| {
            let mut last = 0.0;
            plan.evolve_sampled(&frames.frames, None, |_t, u| {
                last = entanglement_fidelity(u);
            })
            .unwrap();
            last
        })
    });

    let sys6 = dipolar(6);
    let group6 = nested_pauli_group(6).unwrap();
    let cfg6 = EvolutionConfig::new(1e-3, 64);
    let plan6 = EvolutionPlan::new(&sys6, &cfg6).unwrap();
    let spec6 = ProtocolSpec::new(ProtocolKind::Nrd, group6);
    let frames6 = control_frames(&spec6, 256, Some(&mut rng)).unwrap();
    c.bench_function("toggled_evolution_256_intervals_d64", |bench| {
        bench.iter(|| {
            let mut last = 0.0;
            plan6
                .evolve_sampled(&frames6.frames, None, |_t, u| {
                    last = entanglement_fidelity(u);
                })
                .unwrap();
            last
        })
    });
}

criterion_group!(benches, bench_pauli, bench_frame_apply, bench_linalg, bench_evolution);
criterion_main!(benches);
