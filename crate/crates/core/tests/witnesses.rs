use apsum::ap::{IndexSet, Progression};
use apsum::coloring::{Color, OracleColoring, SetColoring, TableColoring};
use apsum::witness::{
    find_brauer, find_fs_system, find_hindman_blocks, find_mono_ap, find_union_blocks,
    verify_fs_system, verify_hindman_blocks, HindmanCaps, Violation,
};
use num_bigint::BigUint;

fn table(text: &str) -> TableColoring {
    TableColoring::parse(text, Some(2)).unwrap()
}

/// First `(a, d)` in lexicographic order with a monochromatic `l`-AP.
fn naive_first(cells: &[Color], l: usize, brauer: bool) -> Option<(usize, usize)> {
    let p = cells.len();
    for a in 1..=p {
        for d in 1..p {
            if a + (l - 1) * d > p {
                break;
            }
            let g = cells[a - 1];
            if (0..l).all(|k| cells[a + k * d - 1] == g) && (!brauer || cells[d - 1] == g) {
                return Some((a, d));
            }
        }
    }
    None
}

fn first_diff(p: &Progression) -> (usize, usize) {
    (p.first().try_into().unwrap(), p.diff().try_into().unwrap())
}

#[test]
fn the_avoiding_coloring_of_eight() {
    let t = table("12211221");
    assert!(find_mono_ap(&t, 3).unwrap().is_none());
    assert!(find_brauer(&t, 3).unwrap().is_none());
    assert!(find_fs_system(&t, 2, 3, false).unwrap().is_none());
    // every extension to [9] has a progression
    for k in 1..=2 {
        let ext = t.extend(k).unwrap();
        assert!(find_mono_ap(&ext, 3).unwrap().is_some());
    }
}

#[test]
fn finders_agree_with_naive_scan() {
    let colorings = [
        "1121222112221211",
        "2121",
        "111",
        "12112212211",
        "1221221121",
    ];
    for text in colorings {
        let t = TableColoring::parse(text, None).unwrap();
        for brauer in [false, true] {
            let found = if brauer {
                find_brauer(&t, 3)
                    .unwrap()
                    .map(|w| first_diff(&w.progression))
            } else {
                find_mono_ap(&t, 3)
                    .unwrap()
                    .map(|w| first_diff(&w.progression))
            };
            assert_eq!(
                found,
                naive_first(t.cells(), 3, brauer),
                "{text} brauer={brauer}"
            );
        }
    }
}

#[test]
fn parity_coloring_brauer_scan() {
    let parity = OracleColoring::parity();
    let cells: Vec<Color> = (1..=20u32)
        .map(|x| apsum::coloring::Coloring::color_of(&parity, &BigUint::from(x)).unwrap())
        .collect();
    let t = TableColoring::new(2, cells.clone()).unwrap();
    let got = find_brauer(&t, 3)
        .unwrap()
        .map(|w| first_diff(&w.progression));
    // even a and even d: 2, 4, 6 with d = 2 is even too
    assert_eq!(got, naive_first(&cells, 3, true));
    assert_eq!(got, Some((2, 2)));
}

/// First FS 2-system by `(Q_1, Q_2)` in `(first, diff)` order, on an all-one
/// coloring of `[p]`, where only the bound on the top sum matters.
fn naive_fs2_all_ones(p: usize, l: usize) -> ((usize, usize), (usize, usize)) {
    let fits = |a: usize, d: usize| a + (l - 1) * d <= p;
    for a1 in 1..=p {
        for d1 in 1..p {
            if !fits(a1, d1) {
                break;
            }
            for a2 in 1..=p {
                for d2 in 1..p {
                    let precedes = a1 < a2 && a1 + (l - 1) * d1 < a2 + (l - 1) * d2;
                    if precedes && fits(a1 + a2, d1 + d2) {
                        return ((a1, d1), (a2, d2));
                    }
                }
            }
        }
    }
    unreachable!()
}

#[test]
fn fs_system_on_constant_coloring() {
    let t = TableColoring::constant(30, 1, 1).unwrap();
    let w = find_fs_system(&t, 2, 3, false).unwrap().unwrap();
    let got = (
        first_diff(&w.progressions[0]),
        first_diff(&w.progressions[1]),
    );
    assert_eq!(got, naive_fs2_all_ones(30, 3));
    assert!(verify_fs_system(&t, &w).is_valid());
    let one = find_fs_system(&TableColoring::constant(12, 1, 1).unwrap(), 1, 3, false)
        .unwrap()
        .unwrap();
    assert_eq!(
        one.progressions,
        vec![Progression::new(1u32, 1u32, 3).unwrap()]
    );
}

#[test]
fn tampered_system_reports_the_top_singleton() {
    let valid = apsum::witness::FsSystemWitness {
        progressions: vec![
            Progression::new(1u32, 1u32, 3).unwrap(),
            Progression::new(10u32, 1u32, 3).unwrap(),
        ],
        gamma: 1,
        brauer: false,
    };
    let mut cells = vec![1; 30];
    for x in 11..=13 {
        cells[x - 1] = 2;
    }
    let t = TableColoring::new(2, cells).unwrap();
    let ones = TableColoring::constant(30, 1, 2).unwrap();
    assert!(verify_fs_system(&ones, &valid).is_valid());
    let mut tampered = valid.clone();
    tampered.progressions[1] = Progression::new(11u32, 1u32, 3).unwrap();
    let report = verify_fs_system(&t, &tampered);
    let top = IndexSet::singleton(2).unwrap();
    for s in 1..=3 {
        assert!(
            report
                .violations
                .iter()
                .any(|v| matches!(v, Violation::TermColor { index_set, s: at, .. } if *index_set == top && *at == s)),
            "missing C={{2}}, s={s}: {:?}",
            report.violations
        );
    }
}

#[test]
fn union_blocks_small_cases() {
    let sc = SetColoring::new(2, 2, vec![1, 1, 2]).unwrap();
    assert!(find_union_blocks(&sc, 2).unwrap().is_none());
    let mono = SetColoring::new(2, 1, vec![1, 1, 1]).unwrap();
    let w = find_union_blocks(&mono, 2).unwrap().unwrap();
    assert_eq!(
        w.blocks,
        vec![
            IndexSet::singleton(1).unwrap(),
            IndexSet::singleton(2).unwrap()
        ]
    );
}

#[test]
fn hindman_blocks_under_parity() {
    let values: Vec<BigUint> = [1u32, 2, 4, 8].map(BigUint::from).to_vec();
    let parity = OracleColoring::parity();
    let w = find_hindman_blocks(&values, &parity, 2, HindmanCaps::default())
        .unwrap()
        .unwrap();
    assert_eq!(
        w.blocks,
        vec![
            IndexSet::singleton(2).unwrap(),
            IndexSet::singleton(3).unwrap()
        ]
    );
    assert_eq!(w.sums, vec![BigUint::from(2u32), BigUint::from(4u32)]);
    // 2, 4, 6 are all even
    assert!(verify_hindman_blocks(&values, &parity, &w).is_valid());
}
