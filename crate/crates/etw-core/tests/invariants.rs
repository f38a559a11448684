//! Quantified invariants over random samples, and the cross-module
//! consistency properties that no single module can state alone.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use etw_core::budgets::Budgets;
use etw_core::domains::{domain_to_modular, WayBelowApprox};
use etw_core::fixtures::{builtin_domain, builtin_domain_names, builtin_family, builtin_tree};
use etw_core::kernel::{
    decode_program, finite_set_program, image_stage, run, we_stage, EvalResult, ProgramIndex,
    StepBudget,
};
use etw_core::nat::{checked_pair, pair, Nat};
use etw_core::numberings::{
    classical_rice_shapiro_oracle, positivity_check, CeSet, ClassicalRsOutcome, PositiveWitness,
    PositivityVerdict, PrincipalNumbering,
};
use etw_core::riceshapiro::{monotone_check, upward_closure_check, ClosureVerdict, MonotoneVerdict};
use etw_core::spaces::{
    brute_force_ix, build_x_s, build_x_t, eff_open_points, point_profile, specialization_leq,
    EffOpenSet, IndexSetJob,
};

fn budgets() -> Budgets {
    Budgets::new(100_000, 1_000)
}

#[test]
fn we_and_image_stages_monotone_on_random_programs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57A6E);
    for _ in 0..100 {
        let e = ProgramIndex::from(rng.gen_range(0..100_000u64));
        let s = rng.gen_range(0..60u64);
        let p = decode_program(&e);
        assert!(
            we_stage(&p, s).is_subset(&we_stage(&p, s + 1)),
            "we_stage monotonicity at e={e}, s={s}"
        );
        assert!(
            image_stage(&p, s).is_subset(&image_stage(&p, s + 1)),
            "image_stage monotonicity at e={e}, s={s}"
        );
    }
}

#[test]
fn budget_monotone_on_random_programs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0D6E7);
    for _ in 0..100 {
        let e = ProgramIndex::from(rng.gen_range(0..100_000u64));
        let x = rng.gen_range(0..30u64);
        let s = rng.gen_range(0..200u64);
        let p = decode_program(&e);
        if let EvalResult::Halted(v) = run(&p, x, StepBudget::new(s)) {
            for extra in [1u64, 17, 1000] {
                assert_eq!(
                    run(&p, x, StepBudget::new(s + extra)),
                    EvalResult::Halted(v),
                    "budget monotonicity at e={e}, x={x}, s={s}"
                );
            }
        }
    }
}

#[test]
fn presentation_law_on_random_programs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9E5E);
    for _ in 0..40 {
        let e = ProgramIndex::from(rng.gen_range(0..50_000u64));
        let ce = CeSet::program(e.clone());
        let p = decode_program(&e);
        for s in [0u64, 3, 11, 47] {
            assert_eq!(ce.stage(s), we_stage(&p, s), "presentation law at e={e}, s={s}");
        }
    }
}

#[test]
fn way_below_stages_on_random_raws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3B3);
    for _ in 0..10 {
        let raw: BTreeSet<Nat> = (0..rng.gen_range(0..12))
            .map(|_| pair(rng.gen_range(0..12u64), rng.gen_range(0..12u64)))
            .collect();
        let wb = WayBelowApprox::new(CeSet::Finite(raw));
        let mut previous = BTreeSet::new();
        for s in 0..=200u64 {
            let a_s = wb.stage(s);
            assert!(previous.is_subset(&a_s), "monotone at {s}");
            assert!(a_s.iter().all(|&(x, y)| x <= s && y <= s), "clamped at {s}");
            for &(x, y) in &a_s {
                for &(y2, z) in &a_s {
                    if y == y2 {
                        assert!(a_s.contains(&(x, z)), "transitive at {s}");
                    }
                }
            }
            previous = a_s;
        }
    }
}

#[test]
fn specialization_is_profile_inclusion() {
    for name in ["fixture1", "wide3", "insep-depth4"] {
        let (space, _) = build_x_t(&builtin_tree(name).unwrap()).unwrap();
        for x in 0..space.points.len() {
            for y in 0..space.points.len() {
                assert_eq!(
                    specialization_leq(&space, x, y).unwrap(),
                    point_profile(&space, x).is_subset(&point_profile(&space, y)),
                    "{name}: profile characterization at ({x}, {y})"
                );
            }
        }
    }
}

#[test]
fn family_openness_transfers_to_the_space() {
    // openness of a class of members in the family matches upward closure
    // of its image in the constructed space, class by class
    let family = builtin_family("subsets01").unwrap();
    let members = family.members().unwrap().to_vec();
    let (space, data) = build_x_s(&family).unwrap();
    for mask in 0u32..16 {
        let k: BTreeSet<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
        let family_open = matches!(
            classical_rice_shapiro_oracle(&members, &k),
            ClassicalRsOutcome::Open { .. }
        );
        // the image of K under the homeomorphism [i] -> member_i
        let image: BTreeSet<usize> = k
            .iter()
            .map(|&i| {
                data.class_member
                    .iter()
                    .position(|m| *m == members[i])
                    .unwrap()
            })
            .collect();
        let space_open = matches!(
            upward_closure_check(&space, &image),
            ClosureVerdict::Closed
        );
        assert_eq!(family_open, space_open, "class mask {mask}");
        // and the set-class monotonicity view agrees through profiles
        let monotone = matches!(monotone_check(&members, &k), MonotoneVerdict::Monotone);
        assert_eq!(monotone, space_open, "profile correspondence at {mask}");
    }
}

#[test]
fn index_set_enumerator_matches_brute_force_on_domain_spaces() {
    let b = budgets();
    for name in builtin_domain_names() {
        let (space, witness) = domain_to_modular(&builtin_domain(name).unwrap());
        let bound = 4 * space.points.len() as Nat + 3;
        for n in 0..witness.len() {
            let open = witness.o[n].clone();
            let class = eff_open_points(&space, &open, b);
            let mut job = IndexSetJob::new(open);
            job.run_to(&space, bound);
            assert_eq!(
                job.produced,
                brute_force_ix(&space, &class, bound),
                "{name}: witness open {n}"
            );
        }
    }
}

#[test]
fn principal_open_numbering_covers_whole_space() {
    let (space, _) = build_x_t(&builtin_tree("fixture1").unwrap()).unwrap();
    let b = budgets();
    // W_0 = omega contains the root index, whose basic open is everything
    let covered = etw_core::spaces::principal_open_numbering(&space, 0, b);
    assert_eq!(covered.len(), space.points.len());
    // the loop program denotes the empty open
    let empty_idx = etw_core::kernel::encode_program(&etw_core::kernel::loop_program())
        .to_u64()
        .unwrap();
    assert!(etw_core::spaces::principal_open_numbering(&space, empty_idx, b).is_empty());
    // the union over all nonempty indices (as an index set too wide for a
    // machine-word code) also covers the space, through the set algebra
    let nonempty: BTreeSet<Nat> = space
        .basis
        .reps()
        .iter()
        .copied()
        .filter(|&i| !space.basis.eval(i).is_empty())
        .collect();
    let program_backed = EffOpenSet {
        index_set: CeSet::from_program(&finite_set_program(&nonempty)),
    };
    let stage_budget = Budgets::new(100_000, 2 * nonempty.iter().max().unwrap() + 200);
    assert_eq!(
        eff_open_points(&space, &program_backed, stage_budget).len(),
        space.points.len()
    );
}

#[test]
fn positivity_program_witness_on_singleton_family() {
    // a witness accepting every pair is sound for the singleton family
    let family = builtin_family("singleton-empty").unwrap();
    let gamma = PrincipalNumbering::new(family);
    let accept_all = PositiveWitness::Program(etw_core::kernel::encode_program(
        &etw_core::kernel::id_program(),
    ));
    assert_eq!(
        positivity_check(&gamma, &accept_all, 6, budgets()),
        PositivityVerdict::Verified
    );
}

#[test]
fn adversarial_positive_witness_is_refuted() {
    let family = builtin_family("subsets01").unwrap();
    let gamma = PrincipalNumbering::new(family);
    // find two indices denoting different members, then accept that pair
    let (mut a, mut b) = (None, None);
    for n in 0..200 {
        match gamma.gamma_member(n, budgets()) {
            Some(0) if a.is_none() => a = Some(n),
            Some(3) if b.is_none() => b = Some(n),
            _ => {}
        }
    }
    let (a, b) = (a.unwrap(), b.unwrap());
    let bad = PositiveWitness::AcceptList(BTreeSet::from([pair(a, b)]));
    assert!(matches!(
        positivity_check(&gamma, &bad, (a.max(b) + 1) as Nat, budgets()),
        PositivityVerdict::Refuted { .. }
    ));
}

#[test]
fn product_members_are_exactly_pairwise_products() {
    let base = builtin_family("subsets01").unwrap();
    let product = etw_core::riceshapiro::product_family(&base).unwrap();
    // independent oracle: enumerate products directly
    let members = base.members().unwrap();
    let mut expected: BTreeSet<BTreeSet<Nat>> = BTreeSet::new();
    for a in members {
        for b in members {
            let mut prod = BTreeSet::new();
            for &x in a {
                for &y in b {
                    prod.insert(checked_pair(x, y).unwrap());
                }
            }
            expected.insert(prod);
        }
    }
    let got: BTreeSet<BTreeSet<Nat>> = product.members.iter().cloned().collect();
    assert_eq!(got, expected);
}

#[test]
fn golden_instance_parses_with_stable_digest() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../instances/demo.etw"
    ))
    .expect("repository instance file");
    let parsed = etw_core::instance::parse_instance(&text).expect("golden instance parses");
    assert_eq!(parsed.programs.len(), 2);
    assert_eq!(parsed.trees.len(), 2);
    assert_eq!(parsed.families.len(), 1);
    assert_eq!(parsed.domains.len(), 1);
    assert_eq!(parsed.spaces.len(), 2);
    assert_eq!(
        etw_core::report::digest_text(&text),
        "0b39183643c931fcc887fe2f0d3455645c070e27cb43643a455087a93770a162",
        "instance digest must be stable; update intentionally if the file changes"
    );
    let resolved =
        etw_core::instance::resolve(&parsed, budgets()).expect("golden instance resolves");
    assert_eq!(resolved.programs.len(), 2);
}
