use proptest::prelude::*;

use rm_srr::geometry::{intersect_flats, Flat, Point};
use rm_srr::gf2::{solve_combination, BitMatrix, BitVector};
use rm_srr::hypergraph::{build_hypergraph, induced_subgraph, EdgePolicy};
use rm_srr::lp::{
    int, matching_number, parse_rational, ratio, solve_max, vertex_cover_number, LinearProgram,
    LpOutcome, Rational, Sense,
};
use rm_srr::recovery::{
    second_smallest_recovery_sets, smallest_recovery_set, sums_to_unit, verify_design_property,
};
use rm_srr::rm::{generator_matrix, object_order, RmParams};
use rm_srr::srr::{lambda_max, lambda_max_from_design, membership_in, DemandVector};

fn bits(len: usize) -> impl Strategy<Value = BitVector> {
    prop::collection::vec(0u8..2, len).prop_map(|b| BitVector::from_bits(&b))
}

fn code() -> impl Strategy<Value = RmParams> {
    (1u32..=5).prop_flat_map(|m| (0..m).prop_map(move |r| RmParams::new(r, m).unwrap()))
}

proptest! {
    #[test]
    fn xor_weights(a in bits(37), b in bits(37)) {
        let c = a.xor(&b);
        prop_assert_eq!(c.xor(&b), a.clone());
        prop_assert_eq!(c.weight(), a.weight() + b.weight() - 2 * a.and(&b).weight());
        prop_assert_eq!(a.dot(&b), a.and(&b).weight() % 2 == 1);
        prop_assert!(a.and(&b).is_subset_of(&a));
    }

    #[test]
    fn solved_combinations_reproduce_target(
        rows in prop::collection::vec(bits(9), 1..6),
        x in bits(9),
    ) {
        let m = BitMatrix::from_rows(rows).unwrap();
        let target = m.mul_vec(&x).unwrap();
        let sol = solve_combination(&m, &target).unwrap().expect("target is in the column space");
        prop_assert_eq!(m.mul_vec(&sol).unwrap(), target);
    }

    #[test]
    fn flats_translate_and_intersect(
        m in 2u32..=5,
        seed in any::<[u32; 6]>(),
    ) {
        let mask = (1u32 << m) - 1;
        let h = Flat::coset(m, seed[0] & mask, &[seed[1] & mask, seed[2] & mask]).unwrap();
        let n = Flat::coset(m, seed[3] & mask, &[seed[4] & mask]).unwrap();
        let shift = Point::new(m, seed[5] & mask);
        let t = h.translate(shift);
        prop_assert_eq!(t.size(), h.size());
        prop_assert_eq!(t.contains(shift), h.contains(Point::origin(m)));
        let inside = h.points()[0];
        prop_assert_eq!(h.translate(Point::new(m, 0)).point_indices(), h.point_indices());
        prop_assert!(h.contains(inside));
        match intersect_flats(&h, &n).unwrap() {
            Some(x) => {
                prop_assert_eq!(x.incidence(), &h.incidence().and(n.incidence()));
                prop_assert!(h.contains_flat(&x) && n.contains_flat(&x));
            }
            None => prop_assert!(h.incidence().and(n.incidence()).is_zero()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recovery_sets_recover_and_form_a_design(p in code(), pick in any::<usize>()) {
        let j = 1 + pick % p.k();
        let g = generator_matrix(p);
        let s = smallest_recovery_set(p, j).unwrap();
        prop_assert!(sums_to_unit(&g, &s.columns, j).unwrap());
        for r in second_smallest_recovery_sets(p, j).unwrap() {
            prop_assert!(sums_to_unit(&g, &r.columns, j).unwrap());
            prop_assert!(r.columns.iter().all(|c| !s.columns.contains(c)));
        }
        prop_assert!(verify_design_property(p, j).unwrap().holds);
    }

    #[test]
    fn lambda_max_ranges(p in code()) {
        let top = int(1i64 << (p.m - p.r));
        let mut last = int(0);
        for j in 1..=p.k() {
            let lam = lambda_max(p, j).unwrap();
            prop_assert_eq!(&lam, &lambda_max_from_design(p, j).unwrap());
            prop_assert!(lam > int(1) && lam <= top);
            // objects are listed by nondecreasing order
            prop_assert!(lam >= last);
            last = lam;
        }
        let l = object_order(p, p.k()).unwrap().order;
        prop_assert_eq!(l, p.r);
        prop_assert_eq!(last, top);
    }

    #[test]
    fn parse_rational_round_trips(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = ratio(p, q);
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }
}

/// Maximum of `c.x` over `{x >= 0, A x <= b}` in two variables, by checking
/// every intersection of two boundary lines.
fn vertex_max(c: &[i64; 2], rows: &[([i64; 2], i64)]) -> Rational {
    let mut lines: Vec<([i64; 2], i64)> = rows.to_vec();
    lines.push(([1, 0], 0));
    lines.push(([0, 1], 0));
    let feasible = |x: &[Rational; 2]| {
        x.iter().all(|v| *v >= int(0))
            && rows
                .iter()
                .all(|(a, b)| int(a[0]) * &x[0] + int(a[1]) * &x[1] <= int(*b))
    };
    let mut best: Option<Rational> = None;
    for (i, (a, b)) in lines.iter().enumerate() {
        for (d, e) in &lines[i + 1..] {
            let det = a[0] * d[1] - a[1] * d[0];
            if det == 0 {
                continue;
            }
            let x = [
                ratio(b * d[1] - a[1] * e, det),
                ratio(a[0] * e - b * d[0], det),
            ];
            if feasible(&x) {
                let v = int(c[0]) * &x[0] + int(c[1]) * &x[1];
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
    }
    best.expect("origin is a vertex")
}

proptest! {
    #[test]
    fn small_programs_match_vertex_enumeration(
        c in any::<[i8; 2]>(),
        raw in prop::collection::vec((any::<[i8; 2]>(), 0i64..8), 0..4),
    ) {
        let c = [i64::from(c[0] % 5), i64::from(c[1] % 5)];
        let mut rows: Vec<([i64; 2], i64)> =
            raw.iter().map(|(a, b)| ([i64::from(a[0] % 4), i64::from(a[1] % 4)], *b)).collect();
        rows.push(([1, 0], 6));
        rows.push(([0, 1], 6));
        let mut lp = LinearProgram::new(vec![int(c[0]), int(c[1])]);
        for (a, b) in &rows {
            lp.add_row(vec![int(a[0]), int(a[1])], Sense::Le, int(*b)).unwrap();
        }
        match solve_max(&lp).unwrap() {
            LpOutcome::Optimal { value, x } => {
                prop_assert!(lp.is_feasible(&x));
                prop_assert_eq!(value, vertex_max(&c, &rows));
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matching_equals_cover_on_object_subsets(
        which in 0usize..3,
        mask in 1u32..(1 << 11),
    ) {
        let (r, m) = [(1, 3), (2, 3), (2, 4)][which];
        let p = RmParams::new(r, m).unwrap();
        let g = build_hypergraph(p, EdgePolicy::Oracle).unwrap();
        let objects: Vec<usize> = (1..=p.k()).filter(|j| mask >> (j - 1) & 1 == 1).collect();
        let sub = induced_subgraph(&g, &objects);
        prop_assert_eq!(matching_number(&sub).unwrap().value, vertex_cover_number(&sub).unwrap().value);
    }

    #[test]
    fn region_is_convex(a in prop::collection::vec(0i64..9, 4), b in prop::collection::vec(0i64..9, 4)) {
        let p = RmParams::new(1, 3).unwrap();
        let g = build_hypergraph(p, EdgePolicy::Oracle).unwrap();
        let point = |v: &[i64]| DemandVector::new(p, v.iter().map(|x| ratio(*x, 4)).collect()).unwrap();
        let (da, db) = (point(&a), point(&b));
        let mid: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let dm = DemandVector::new(p, mid.iter().map(|x| ratio(*x, 8)).collect()).unwrap();
        let ia = membership_in(&g, &da).unwrap().is_inside();
        let ib = membership_in(&g, &db).unwrap().is_inside();
        if ia && ib {
            prop_assert!(membership_in(&g, &dm).unwrap().is_inside());
        }
        let half = DemandVector::new(p, a.iter().map(|x| ratio(*x, 8)).collect()).unwrap();
        if ia {
            prop_assert!(membership_in(&g, &half).unwrap().is_inside());
        }
    }
}
