use pfcirc::certs::{eliminate_linears, membership_certificate, paper_system, PolyQ};
use pfcirc::circuit::topologies;
use pfcirc::invariants::{dual_invariants, InvariantVector};
use pfcirc::swapsub::{
    cogate_matrix, demo_substitution, paper_solution, random_solution, sample_solution,
};
use pfcirc::varieties::is_pfaffian_cogate_point;
use pfcirc::{samplers, QubitTensor, Scalar, Variance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn replaced_swap_keeps_swap_invariants() {
    // The basis change is unimodular, so the covector SWAP∘(M⊗N⊗I⊗I) keeps
    // the invariant values (2, 1, 0, 0) while its even part becomes Pfaffian.
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..10 {
        let sol = random_solution(&mut rng);
        let (p, q) = sol.parts();
        let full = p.add(&q).unwrap();
        assert_eq!(
            dual_invariants(&full).unwrap(),
            InvariantVector::from_i64([2, 1, 0, 0])
        );
        assert!(is_pfaffian_cogate_point(&p).unwrap());
        assert_eq!(&cogate_matrix(&p).unwrap(), sol.s());
    }
}

#[test]
fn explicit_solution_in_cogate_pair_host() {
    let sol = paper_solution();
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let host = samplers::randomize_circuit(&topologies::by_name("cogate-pair").unwrap(), &mut rng);
    let out = demo_substitution(&host, 0, &sol).unwrap();
    assert!(out.equal());
    // The other hub can be replaced just as well.
    assert!(demo_substitution(&host, 1, &sol).unwrap().equal());
}

#[test]
fn irrational_parameters() {
    let r = Scalar::sqrt2();
    let sol = sample_solution(&[r.clone(), Scalar::i(), Scalar::from_ratio(1, 3), r]).unwrap();
    let (p, _) = sol.parts();
    assert!(is_pfaffian_cogate_point(&p).unwrap());
    assert!(!is_pfaffian_cogate_point(&QubitTensor::swap_gate(Variance::Bra)).unwrap());
}

#[test]
fn reduced_system_alone_has_a_certificate() {
    let (reduced, sub) = eliminate_linears(&paper_system()).unwrap();
    let cert =
        membership_certificate(&PolyQ::from_i64(sub.kept_vars.len(), 1), &reduced, 6).unwrap();
    assert!(cert.verify(&reduced));
    assert!(membership_certificate(&PolyQ::from_i64(8, 1), &reduced, 5).is_err());
}
