use apsum::ap::{nonempty_subsets, IndexSet, Progression};
use apsum::coloring::{Color, Coloring, OracleColoring};
use apsum::construct::{
    build_power_family, induced_coloring, merge_step, run_power_pipeline, run_stage_pipeline,
    seed_family, verify_max_bound, verify_power_disjoint_claim, verify_stage, MergeOutcome,
    SeedVariant,
};
use apsum::witness::{verify_fs_system, HindmanCaps};
use num_bigint::BigUint;

fn firsts(p: &[Progression]) -> Vec<u64> {
    p.iter().map(|x| x.first().try_into().unwrap()).collect()
}

#[test]
fn greedy_seed_families() {
    let plain = seed_family(SeedVariant::Plain, 2, 3).unwrap();
    // a_2 > 1 + 1·2, a_3 > 1 + 4 + 2·2
    assert_eq!(firsts(&plain.members), vec![1, 4, 10]);
    assert!(plain
        .members
        .iter()
        .all(|p| p.diff() == &BigUint::from(1u32) && p.len() == 2));

    let brauer = seed_family(SeedVariant::Brauer, 2, 3).unwrap();
    // a_2 > 2·1, a_3 > 2·(1 + 3)
    assert_eq!(firsts(&brauer.members), vec![1, 3, 9]);
    assert!(brauer.members.iter().all(|p| p.diff() == p.first()));
}

#[test]
fn parity_merge_on_plain_seeds() {
    let parity = OracleColoring::parity();
    let seeds = seed_family(SeedVariant::Plain, 3, 6).unwrap();
    let MergeOutcome::Merged {
        family,
        blocks,
        alpha,
        report,
        ..
    } = merge_step(&seeds, &parity, 2, HindmanCaps::default()).unwrap()
    else {
        panic!("merge truncated");
    };
    assert!(report.is_valid(), "{:?}", report.violations);
    assert_eq!(blocks.len(), 2);
    assert!(blocks[0].before(&blocks[1]));
    // condition (a) at s = 1, recomputed directly
    for set in nonempty_subsets(2) {
        let first: BigUint = set
            .iter()
            .map(|i| family.members[i - 1].first().clone())
            .sum();
        assert_eq!(parity.color_of(&first).unwrap(), alpha);
    }
    assert!(verify_stage(&family, &parity).is_valid());
}

#[test]
fn brauer_merge_keeps_the_difference_identity() {
    for oracle in [
        OracleColoring::parity(),
        OracleColoring::residue(3).unwrap(),
    ] {
        let seeds = seed_family(SeedVariant::Brauer, 3, 6).unwrap();
        if let MergeOutcome::Merged { family, .. } =
            merge_step(&seeds, &oracle, 2, HindmanCaps::default()).unwrap()
        {
            for set in nonempty_subsets(family.size()) {
                let sum = apsum::ap::oplus_family(&family.members, &set).unwrap();
                assert_eq!(sum.diff(), sum.first());
            }
        }
    }
}

#[test]
fn full_stage_runs_with_a_constant_oracle() {
    let one = OracleColoring::constant(1, 1).unwrap();
    for variant in [SeedVariant::Plain, SeedVariant::Brauer] {
        let run =
            run_stage_pipeline(variant, &one, 3, 3, 6, &[4, 3, 2], HindmanCaps::default()).unwrap();
        assert!(
            run.succeeded(),
            "{variant:?}: {:?} {:?}",
            run.truncation,
            run.problems
        );
        let w = apsum::witness::FsSystemWitness {
            progressions: run.progressions.clone(),
            gamma: 1,
            brauer: variant == SeedVariant::Brauer,
        };
        assert!(verify_fs_system(&one, &w).is_valid());
    }
}

/// `P_i = (2^i, 2^{h_i}, q)` with `h_i = (m + i) + (i - 1) q`.
fn by_hand(m: u64, q: usize) -> Vec<Vec<u64>> {
    (1..=m)
        .map(|i| {
            let h = (m + i) + (i - 1) * q as u64;
            (0..q as u64).map(|s| (1 << i) + s * (1 << h)).collect()
        })
        .collect()
}

#[test]
fn power_family_small_members() {
    let fam = build_power_family(2, 3).unwrap();
    assert_eq!(fam.h, vec![3, 7]);
    let terms: Vec<Vec<u64>> = fam
        .members
        .iter()
        .map(|p| p.terms().map(|t| t.try_into().unwrap()).collect())
        .collect();
    assert_eq!(terms, vec![vec![2, 10, 18], vec![4, 132, 260]]);
    assert_eq!(terms, by_hand(2, 3));
    let small = build_power_family(1, 2).unwrap();
    assert_eq!(small.h, vec![2]);
    assert_eq!(by_hand(1, 2), vec![vec![2, 6]]);
    assert!(verify_power_disjoint_claim(&fam).is_valid());
}

#[test]
fn max_bound_values() {
    let r = verify_max_bound(2, 3).unwrap();
    assert_eq!(r.max, "278");
    assert_eq!(r.bound, (BigUint::from(1u32) << 27u32).to_string());
    assert!(r.all_hold());
    let r = verify_max_bound(1, 2).unwrap();
    assert_eq!(r.max, "6");
    assert!(r.final_holds);
    // the last chain step needs q >= 3
    assert_eq!(r.failed_steps(), vec!["2^{q+1} 2^{2q^2} <= 2^{q^3}"]);
    for q in 2..=10 {
        for m in 1..=q {
            assert!(verify_max_bound(m, q).unwrap().final_holds, "m={m} q={q}");
        }
    }
    for q in 3..=8 {
        for m in 1..=q.min(6) {
            assert!(verify_max_bound(m, q).unwrap().all_hold(), "m={m} q={q}");
        }
    }
}

#[test]
fn induced_coloring_classes() {
    let fam = build_power_family(1, 3).unwrap();
    let ind = induced_coloring(&fam, &OracleColoring::parity()).unwrap();
    assert_eq!(ind.classes, vec![vec![1, 2, 3]]);

    // residues mod 3 of the three block sums at each position, by hand
    let fam = build_power_family(2, 3).unwrap();
    let ind = induced_coloring(&fam, &OracleColoring::residue(3).unwrap()).unwrap();
    let hand = by_hand(2, 3);
    let vectors: Vec<Vec<Color>> = (0..3)
        .map(|u| {
            [hand[0][u], hand[1][u], hand[0][u] + hand[1][u]]
                .iter()
                .map(|x| (x % 3) as Color + 1)
                .collect()
        })
        .collect();
    assert_eq!(ind.vectors, vectors);
    let mut expect = Vec::<Vec<usize>>::new();
    let mut reps = Vec::<&Vec<Color>>::new();
    for (u, v) in vectors.iter().enumerate() {
        match reps.iter().position(|r| *r == v) {
            Some(k) => expect[k].push(u + 1),
            None => {
                reps.push(v);
                expect.push(vec![u + 1]);
            }
        }
    }
    assert_eq!(ind.classes, expect);
}

#[test]
fn pipeline_with_parity_base() {
    let parity = OracleColoring::parity();
    let t = run_power_pipeline(3, 1, 2, &parity, 1, 5).unwrap();
    assert!(t.failure.is_none(), "{:?}", t.failure);
    assert_eq!(t.induced.as_ref().unwrap().class_count(), 1);
    assert_eq!(
        t.blocks,
        vec![IndexSet::singleton(1).unwrap().to_mask().unwrap()]
    );
    let w = t.witness().unwrap();
    assert!(verify_fs_system(&parity, &w).is_valid());
}
