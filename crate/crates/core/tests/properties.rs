use itertools::Itertools;
use proptest::prelude::*;
use proptest::sample::subsequence;

use tsn_core::minors::{
    all_systems, disjoint_systems, minor, one_per_level_side_placements, side_product_check,
    signed_sum, symbolic_det,
};
use tsn_core::placement::valid_placements;
use tsn_core::solver::{
    min_field, CompiledMinor, EvalTable, ReceiverSet, SolveOptions, Strategy as Search,
};
use tsn_core::{Field, Lattice, Placement, PointSpace};

const FAMILY_LIMIT: u128 = 200_000;

fn all_placements(l: &Lattice) -> impl Iterator<Item = Placement> + '_ {
    (1..=l.vertex_count())
        .combinations(l.length())
        .map(move |c| Placement::new(l, c).unwrap())
}

fn check_validity_oracle(l: &Lattice, p: &Placement) {
    assert_eq!(p.is_distributed(l), p.disjoint_paths_exist(l), "{p}");
    if let Some(sys) = p.disjoint_paths(l) {
        assert!(sys.check(l, p.labels()));
    }
}

fn check_minor_shape(l: &Lattice, p: &Placement) {
    let m = minor(l, p);
    let systems = disjoint_systems(l, p);
    assert_eq!(m.terms().len(), systems.len(), "{p}");
    assert!(m.terms().iter().all(|t| t.coeff.abs() == 1));
    assert!(m.to_poly().max_degree_per_var() <= 1);
    assert_eq!(m.is_zero(), !p.is_valid(l));
    for s in &systems {
        assert!(s.check(l, p.labels()));
    }
}

fn check_cancellation(l: &Lattice, p: &Placement) -> bool {
    let Ok(families) = all_systems(l, p, FAMILY_LIMIT) else {
        return false;
    };
    assert_eq!(signed_sum(l, &families), minor(l, p).to_poly(), "{p}");
    true
}

fn check_determinant(l: &Lattice, p: &Placement) {
    assert_eq!(symbolic_det(l, p, 1000).unwrap(), minor(l, p), "{p}");
}

fn check_symmetry(l: &Lattice, p: &Placement) {
    let v = p.is_valid(l);
    assert_eq!(p.rotate(l).is_valid(l), v);
    assert_eq!(p.reflect(l).is_valid(l), v);
    assert_eq!(p.rotate(l).rotate(l).rotate(l), *p);
    assert_eq!(p.reflect(l).reflect(l), *p);
}

#[test]
fn exhaustive_identities_up_to_four() {
    for n in 1..=4 {
        let l = Lattice::new(n).unwrap();
        for p in all_placements(&l) {
            check_validity_oracle(&l, &p);
            check_minor_shape(&l, &p);
            assert!(
                check_cancellation(&l, &p),
                "family enumeration over budget at n={n}"
            );
            check_determinant(&l, &p);
            check_symmetry(&l, &p);
        }
    }
}

#[test]
fn side_placements_multiply_to_all_edges() {
    for n in 2..=7 {
        let l = Lattice::new(n).unwrap();
        let sides = one_per_level_side_placements(&l);
        assert_eq!(sides.len(), 1 << (n - 1));
        for p in &sides {
            assert!(p.is_valid(&l));
            assert!(minor(&l, p).is_monomial());
            assert!(side_product_check(&l, p), "n={n} {p}");
        }
    }
}

#[test]
fn reflection_preserves_minor_term_count() {
    let l = Lattice::new(4).unwrap();
    for p in valid_placements(&l) {
        let len = minor(&l, &p).terms().len();
        assert_eq!(minor(&l, &p.reflect(&l)).terms().len(), len);
    }
}

fn placement_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    let v = n * (n + 1) / 2;
    subsequence((1..=v).collect::<Vec<_>>(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_identities_n5(labels in placement_strategy(5)) {
        let l = Lattice::new(5).unwrap();
        let p = Placement::new(&l, labels).unwrap();
        check_validity_oracle(&l, &p);
        check_minor_shape(&l, &p);
        check_cancellation(&l, &p);
        check_determinant(&l, &p);
        check_symmetry(&l, &p);
    }

    #[test]
    fn sampled_identities_n6(labels in placement_strategy(6)) {
        let l = Lattice::new(6).unwrap();
        let p = Placement::new(&l, labels).unwrap();
        check_validity_oracle(&l, &p);
        check_minor_shape(&l, &p);
        check_cancellation(&l, &p);
        check_determinant(&l, &p);
        check_symmetry(&l, &p);
    }

    #[test]
    fn eval_is_a_ring_homomorphism(
        a in 0usize..150,
        b in 0usize..150,
        q in prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 16]),
        seed in prop::collection::vec(0u32..256, 12),
    ) {
        let l = Lattice::new(4).unwrap();
        let all = valid_placements(&l);
        let f = Field::new(q).unwrap();
        let pt: Vec<u8> = seed.iter().map(|&s| (s % q) as u8).collect();
        let (ma, mb) = (minor(&l, &all[a]), minor(&l, &all[b]));
        let (va, vb) = (f.eval(&ma, &pt).unwrap(), f.eval(&mb, &pt).unwrap());
        prop_assert_eq!(ma.to_poly().eval(&f, &pt), va);
        prop_assert_eq!((&ma.to_poly() * &mb.to_poly()).eval(&f, &pt), f.mul(va, vb));
        prop_assert_eq!((&ma.to_poly() + &mb.to_poly()).eval(&f, &pt), f.add(va, vb));
        prop_assert_eq!(f.eval(&ma.negated(), &pt).unwrap(), f.neg(va));
        prop_assert_eq!(CompiledMinor::new(&ma, &f).eval(&f, &pt), va);
    }

    #[test]
    fn min_field_is_symmetric(ids in subsequence((0usize..150).collect::<Vec<_>>(), 1..=4)) {
        let l = Lattice::new(4).unwrap();
        let all = valid_placements(&l);
        let opts = SolveOptions { strategy: Search::Exhaustive, budget_points: 1 << 25, trials: 0, seed: 0 };
        let rs = ReceiverSet::with_sides(&l, ids.iter().map(|&i| all[i].clone()).collect()).unwrap();
        let base = min_field(&l, &rs, &opts).unwrap().exact;
        prop_assert!(base.is_some());
        prop_assert_eq!(min_field(&l, &rs.rotate(&l), &opts).unwrap().exact, base);
        prop_assert_eq!(min_field(&l, &rs.reflect(&l), &opts).unwrap().exact, base);
    }
}

#[test]
fn eval_tables_spot_check() {
    use rand::{Rng, SeedableRng};
    let l = Lattice::new(4).unwrap();
    let all = valid_placements(&l);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for q in [3, 4] {
        let f = Field::new(q).unwrap();
        let space = PointSpace::new(q, 12, true);
        for p in all.iter().step_by(7) {
            let m = minor(&l, p);
            let table = EvalTable::build(&f, &CompiledMinor::new(&m, &f), space);
            assert!(table.count_ones() > 0);
            let mut pt = [0u8; 12];
            for _ in 0..1000 {
                let b = rng.gen_range(0..table.len());
                space.point_at(b, &mut pt);
                assert_eq!(
                    table.get(b),
                    f.eval(&m, &pt).unwrap() != 0,
                    "{p} q={q} bit {b}"
                );
            }
        }
    }
}
