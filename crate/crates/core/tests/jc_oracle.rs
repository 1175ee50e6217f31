use subplanck::protocol::{dispersive_protocol, JCParams, JointState, Level};
use subplanck::*;

/// Far-detuned JC evolution of the coupled level against the analytic
/// conditional phase: the branch picks up `e^{iπ a†a}` up to a global phase.
fn conditional_phase_fidelity(alpha: C64) -> f64 {
    let nbar = alpha.norm_sqr();
    let field = CoherentSuperposition::coherent(alpha);
    let n = field.default_truncation();
    let psi = field.to_fock(n).unwrap();
    let params = JCParams::dispersive_half_period(1.0, nbar, 20.0 * nbar.sqrt());
    assert!(params.is_dispersive());
    let numeric =
        jc_numeric_evolve(&psi, [C64::new(0.0, 0.0), C64::new(1.0, 0.0)], &params).unwrap();

    // the dispersive protocol's intermediate state carries the same branch map
    let analytic = dispersive_protocol(alpha, &PerturbationSpec::identity()).unwrap();
    let flipped = analytic
        .intermediate
        .unwrap()
        .branch(Level::Ground)
        .state
        .clone();
    let want = flipped.to_fock(n).unwrap();
    let target = JointState {
        excited: vec![C64::new(0.0, 0.0); n],
        ground: want.coefficients,
    };
    numeric.fidelity(&target)
}

#[test]
fn dispersive_branch_fidelity_up_to_nbar_16() {
    for alpha in [C64::new(0.0, 2.0), C64::new(4.0, 0.0)] {
        let f = conditional_phase_fidelity(alpha);
        assert!(f >= 0.99, "nbar {}: {f}", alpha.norm_sqr());
    }
}
