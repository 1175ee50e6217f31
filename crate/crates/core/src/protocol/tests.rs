use super::*;
use crate::states::{cat, FockVector};
use approx::assert_abs_diff_eq;
use std::println;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn analytic(alpha: C64, weights: (C64, C64)) -> HybridState {
    let coh = CoherentSuperposition::coherent(alpha);
    HybridState {
        excited: Branch {
            weight: weights.0,
            state: coh.clone(),
        },
        ground: Branch {
            weight: weights.1,
            state: coh,
        },
    }
}

#[test]
fn dispersive_self_inverts() {
    let alpha = c(0.0, 4.0);
    let r = dispersive_protocol(alpha, &PerturbationSpec::identity()).unwrap();
    assert_abs_diff_eq!(r.p_e, 0.0, epsilon = 1e-15);
    let start =
        HybridState::product(Level::Ground, CoherentSuperposition::coherent(alpha)).unwrap();
    assert!(r.final_state.fidelity(&start) > 1.0 - 1e-10);
}

#[test]
fn dispersive_intermediate_states() {
    let alpha = c(0.0, 4.0);
    let r = dispersive_protocol(alpha, &PerturbationSpec::identity()).unwrap();
    let inter = r.intermediate.unwrap();
    assert_abs_diff_eq!(inter.p_excited(), 0.5, epsilon = 1e-12);
    assert!((inter.ground.state.terms()[0].amplitude + alpha).norm() < 1e-12);

    let r = dispersive_protocol(alpha, &PerturbationSpec::rotation(0.0)).unwrap();
    let inter = r.intermediate.unwrap();
    assert!((inter.excited.state.terms()[0].amplitude - 2.0 * alpha).norm() < 1e-12);
    assert!(inter.ground.state.terms()[0].amplitude.norm() < 1e-12);
}

#[test]
fn dispersive_fringe_points() {
    let alpha = c(0.0, 4.0);
    let r = dispersive_protocol(
        alpha,
        &PerturbationSpec::displacement_orthogonal_to(alpha, PI / 16.0),
    )
    .unwrap();
    assert_abs_diff_eq!(r.p_e, 1.0, epsilon = 1e-12);
    let r = dispersive_protocol(alpha, &PerturbationSpec::rotation(PI / (8.0 * 16.0))).unwrap();
    assert_abs_diff_eq!(r.p_e, 0.5, epsilon = 1e-12);
}

#[test]
fn dispersive_final_state_matches_closed_form() {
    let alpha = c(1.0, 3.0);
    for s in [0.01, 0.07, 0.2, 0.33] {
        let r = dispersive_protocol(
            alpha,
            &PerturbationSpec::displacement_orthogonal_to(alpha, s),
        )
        .unwrap();
        let want = analytic(alpha, dispersive_weights(alpha.norm(), s));
        assert!(r.final_state.fidelity(&want) > 1.0 - 1e-10);
        let theta = s / alpha.norm();
        let r = dispersive_protocol(alpha, &PerturbationSpec::rotation(theta)).unwrap();
        assert!(r.final_state.fidelity(&want) > 1.0 - 1e-10);
    }
}

#[test]
fn exact_model_return_probability_is_intermediate_overlap() {
    let alpha = c(0.0, 3.0);
    let pert = PerturbationSpec::displacement_orthogonal_to(alpha, 0.13);
    let r = dispersive_protocol_with(alpha, &pert, PerturbationModel::Exact).unwrap();
    let inter = r.intermediate.clone().unwrap();
    let mut joint = inter.to_joint();
    joint = perturb(joint, &pert, PerturbationModel::Exact);
    let perturbed = joint.into_hybrid(alpha);
    assert_abs_diff_eq!(
        r.return_probability,
        inter.fidelity(&perturbed),
        epsilon = 1e-12
    );
    // exact model carries the e^{-2 s^2} envelope
    let s: f64 = 0.13;
    let want = (1.0 - (-2.0 * s * s).exp() * (4.0 * 3.0 * s).cos()) / 2.0;
    assert_abs_diff_eq!(r.p_e, want, epsilon = 1e-12);
}

#[test]
fn intermediate_overlap_reproduces_cat_overlap() {
    // the intermediate state's overlap with its displaced copy equals the cat's
    let alpha = c(0.0, 4.0);
    let pert = PerturbationSpec::displacement_orthogonal_to(alpha, 0.08);
    let r = dispersive_protocol_with(alpha, &pert, PerturbationModel::Exact).unwrap();
    let cat_overlap = crate::metrology::exact_overlap(&cat(alpha), &pert);
    assert_abs_diff_eq!(r.return_probability, cat_overlap, epsilon = 1e-10);
}

#[test]
fn generic_empty_sequence() {
    let alpha = c(2.0, -1.0);
    let r = generic_strategy(
        &[],
        &PerturbationSpec::identity(),
        PerturbationModel::Exact,
        alpha,
        Level::Excited,
    )
    .unwrap();
    assert_abs_diff_eq!(r.p_e, 1.0, epsilon = 1e-15);
    assert!(r.final_state.excited.state.terms()[0].amplitude == alpha);
}

#[test]
fn generic_reproduces_dispersive() {
    let alpha = c(0.0, 4.0);
    for pert in [
        PerturbationSpec::displacement_orthogonal_to(alpha, 0.05),
        PerturbationSpec::rotation(0.01),
    ] {
        let steps = dispersive_steps(alpha, pert.kind);
        let g = generic_strategy(
            &steps,
            &pert,
            PerturbationModel::Linearized,
            alpha,
            Level::Ground,
        )
        .unwrap();
        let d = dispersive_protocol(alpha, &pert).unwrap();
        assert_eq!(g, d);
    }
}

#[test]
fn generic_rejects_non_finite_steps() {
    let err = generic_strategy(
        &[Step::Rotate(f64::NAN)],
        &PerturbationSpec::identity(),
        PerturbationModel::Exact,
        c(1.0, 0.0),
        Level::Excited,
    );
    assert!(matches!(err, Err(Error::InvalidArgument(_))));
}

#[test]
fn perturbation_leaves_tls_weights() {
    let alpha = c(0.0, 3.0);
    let r = dispersive_protocol(alpha, &PerturbationSpec::identity()).unwrap();
    let inter = r.intermediate.unwrap();
    for model in [PerturbationModel::Exact, PerturbationModel::Linearized] {
        let pert = PerturbationSpec::displacement(0.3, 1.1);
        let after = perturb(inter.to_joint(), &pert, model).into_hybrid(alpha);
        assert_abs_diff_eq!(after.p_excited(), inter.p_excited(), epsilon = 1e-12);
        assert_abs_diff_eq!(after.p_ground(), inter.p_ground(), epsilon = 1e-12);
    }
}

#[test]
fn resonant_self_inverts() {
    let alpha = c(0.0, 4.0);
    let r = resonant_protocol(alpha, &PerturbationSpec::identity(), 1.0).unwrap();
    assert_abs_diff_eq!(r.p_e, 1.0, epsilon = 1e-12);
    let start =
        HybridState::product(Level::Excited, CoherentSuperposition::coherent(alpha)).unwrap();
    assert!(r.final_state.fidelity(&start) > 1.0 - 1e-10);
}

#[test]
fn resonant_intermediate_is_factorized_state() {
    for alpha in [c(0.0, 4.0), c(3.0, 0.0), c(1.5, -2.5)] {
        let r = resonant_protocol(alpha, &PerturbationSpec::identity(), 1.0).unwrap();
        let want = resonant_product_state(alpha).unwrap();
        assert!(r.intermediate.unwrap().fidelity(&want) > 1.0 - 1e-12);
    }
}

#[test]
fn resonant_fringe_and_weights() {
    let alpha = c(0.0, 4.0);
    let along = PerturbationSpec::displacement(PI / 16.0, alpha.arg());
    let r = resonant_protocol(alpha, &along, 1.0).unwrap();
    assert_abs_diff_eq!(r.p_e, 0.0, epsilon = 1e-12);

    let alpha = c(2.0, 1.5);
    for s in [0.02, 0.1, 0.25] {
        let pert = PerturbationSpec::displacement(s, alpha.arg());
        let r = resonant_protocol(alpha, &pert, 1.0).unwrap();
        let want = analytic(alpha, resonant_weights(alpha, s));
        assert!(r.final_state.fidelity(&want) > 1.0 - 1e-10);
        // the phase factor b sits on the ground branch
        let ratio = r.final_state.ground.weight / r.final_state.excited.weight;
        let want_ratio = want.ground.weight / want.excited.weight;
        assert!((ratio - want_ratio).norm() < 1e-10);
    }
}

#[test]
fn resonant_rotation_maps_to_theta_alpha() {
    let alpha = c(0.0, 4.0);
    let theta = 0.01;
    let r = resonant_protocol(alpha, &PerturbationSpec::rotation(theta), 1.0).unwrap();
    let x = 4.0 * alpha.norm() * theta * alpha.norm();
    assert_abs_diff_eq!(r.p_e, (1.0 + x.cos()) / 2.0, epsilon = 1e-12);
}

#[test]
fn resonant_shortened_interaction() {
    let alpha = c(0.0, 4.0);
    let s = 0.05;
    let half =
        resonant_protocol(alpha, &PerturbationSpec::displacement(s, alpha.arg()), 0.5).unwrap();
    let s_eff = s * (PI * 0.5 / 2.0).sin();
    assert_abs_diff_eq!(
        half.p_e,
        (1.0 + (4.0 * 4.0 * s_eff).cos()) / 2.0,
        epsilon = 1e-12
    );
    // still 1/|α| scaling: the first dark point sits at s = π/(4|α| sin(φ/2))
    for mag in [3.0, 6.0] {
        let a = c(0.0, mag);
        let s0 = PI / (4.0 * mag * (PI / 4.0).sin());
        let r = resonant_protocol(a, &PerturbationSpec::displacement(s0, a.arg()), 0.5).unwrap();
        assert_abs_diff_eq!(r.p_e, 0.0, epsilon = 1e-12);
    }
    let r = resonant_protocol(alpha, &PerturbationSpec::rotation(0.004), 0.5).unwrap();
    let x = 4.0 * 4.0 * 0.004 * 4.0 * (PI / 4.0).sin();
    assert_abs_diff_eq!(r.p_e, (1.0 + x.cos()) / 2.0, epsilon = 1e-12);
}

#[test]
fn resonant_argument_errors() {
    let alpha = c(0.0, 4.0);
    let p = PerturbationSpec::identity();
    assert_eq!(
        resonant_protocol(alpha, &p, 0.0).unwrap_err(),
        Error::DtFraction(0.0)
    );
    assert_eq!(
        resonant_protocol(alpha, &p, 1.5).unwrap_err(),
        Error::DtFraction(1.5)
    );
    assert!(resonant_protocol(c(1.0, 0.0), &p, 1.0).is_err());
    assert!(dispersive_protocol(c(1.0, 0.0), &p).is_err());
}

#[test]
fn revival_times() {
    let p = JCParams::resonant(4.0 * PI, 1.0, 0.0);
    assert_abs_diff_eq!(revival_time(&p), 1.0, epsilon = 1e-15);
    let p4 = JCParams { nbar: 4.0, ..p };
    assert_abs_diff_eq!(revival_time(&p4), 2.0, epsilon = 1e-15);
    let ion = JCParams::resonant(2.0 * PI / 140e-6, 20.0, 0.0);
    let half = revival_time(&ion) / 2.0;
    assert!((0.60e-3..=0.63e-3).contains(&half), "{half}");
}

#[test]
fn dispersive_flag() {
    let p = JCParams::dispersive_half_period(1.0, 9.0, 60.0);
    assert!(p.is_dispersive());
    assert!(!JCParams::dispersive_half_period(1.0, 9.0, 20.0).is_dispersive());
}

#[test]
fn numeric_identity_at_t0() {
    let psi = CoherentSuperposition::coherent(c(1.0, 1.0))
        .to_fock(30)
        .unwrap();
    let tls = [c(0.6, 0.0), c(0.0, 0.8)];
    let out = jc_numeric_evolve(&psi, tls, &JCParams::resonant(1.0, 2.0, 0.0)).unwrap();
    assert_eq!(out, JointState::product(tls, &psi));
}

#[test]
fn numeric_vacuum_rabi_flop() {
    let omega = 2.7;
    let psi = CoherentSuperposition::vacuum().to_fock(4).unwrap();
    let out = jc_numeric_evolve(
        &psi,
        [c(1.0, 0.0), c(0.0, 0.0)],
        &JCParams::resonant(omega, 1.0, PI / omega),
    )
    .unwrap();
    let mut target = JointState {
        excited: std::vec![c(0.0, 0.0); 4],
        ground: std::vec![c(0.0, 0.0); 4],
    };
    target.ground[1] = c(1.0, 0.0);
    assert!(out.fidelity(&target) >= 1.0 - 1e-6);
    // c_g1 = -i sin(Ω t / 2)
    assert!((out.ground[1] - c(0.0, -1.0)).norm() < 1e-6);
}

#[test]
fn numeric_rejects_truncated_input() {
    let psi = CoherentSuperposition::coherent(c(3.0, 0.0))
        .to_fock(12)
        .unwrap();
    let err = jc_numeric_evolve(
        &psi,
        [c(1.0, 0.0), c(0.0, 0.0)],
        &JCParams::resonant(1.0, 9.0, 1.0),
    );
    assert!(matches!(err, Err(Error::Truncation(_))));
}

#[test]
fn numeric_norm_preserved() {
    let alpha = c(0.0, 2.0);
    let field = CoherentSuperposition::coherent(alpha);
    let psi = field.to_fock(field.default_truncation()).unwrap();
    let params = JCParams::resonant(1.0, 4.0, 7.3);
    let out = jc_numeric_evolve(&psi, [c(1.0, 0.0), c(0.0, 0.0)], &params).unwrap();
    assert_abs_diff_eq!(out.norm_sqr(), psi.norm_sqr(), epsilon = 1e-9);
}

#[test]
fn numeric_half_revival_factorizes() {
    let alpha = c(3.0, 0.0);
    let field = CoherentSuperposition::coherent(alpha);
    let n = field.default_truncation() + 10;
    let psi = field.to_fock(n).unwrap();
    let mut params = JCParams::resonant(1.0, alpha.norm_sqr(), 0.0);
    params.interaction_time = revival_time(&params) / 2.0;
    let out = jc_numeric_evolve(&psi, [c(1.0, 0.0), c(0.0, 0.0)], &params).unwrap();
    let analytic = JointState::from_hybrid(&resonant_product_state(alpha).unwrap(), n).unwrap();
    let fidelity = out.fidelity(&analytic);
    println!("half-revival factorization fidelity at |alpha|=3: {fidelity:.4}");
    // the factorized form is a leading-order picture; the exact dynamics keep
    // a residual relative phase and number squeezing, measured near 0.70
    assert!(fidelity >= 0.65, "{fidelity}");
}

#[test]
fn numeric_dispersive_conditional_phase() {
    // ground branch of the three-level scheme: |g⟩ couples to an auxiliary
    // upper level, played here by the numeric TLS's upper state
    let omega = 1.0;
    let alpha = c(0.0, 3.0);
    let nbar = alpha.norm_sqr();
    let field = CoherentSuperposition::coherent(alpha);
    let n = field.default_truncation();
    let psi = field.to_fock(n).unwrap();
    let params = JCParams::dispersive_half_period(omega, nbar, 20.0 * omega * nbar.sqrt());
    let out = jc_numeric_evolve(&psi, [c(0.0, 0.0), c(1.0, 0.0)], &params).unwrap();
    let flipped = CoherentSuperposition::coherent(-alpha).to_fock(n).unwrap();
    let ground = FockVector {
        coefficients: out.ground.clone(),
        leakage: 0.0,
    };
    let fidelity = ground.dot(&flipped).norm_sqr();
    println!("dispersive branch fidelity at nbar=9: {fidelity:.6}");
    assert!(fidelity >= 0.99, "{fidelity}");
}
