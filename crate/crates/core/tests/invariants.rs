use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use ednorm::lattice::{
    self, rational_kernel_basis, smith_normal_form, span_rank, standard_weight, IntegerMatrix,
    LatticeSpec, Weight, WeightSet,
};
use ednorm::permgroup::{self, sylow_subgroup, Perm};

/// Fixed seed so every run draws the same cases.
fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

/// Zero-sum entries of length `n`, last entry balancing the rest.
fn zero_sum(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(lo..=hi, n - 1).prop_map(|mut v| {
        let s: i64 = v.iter().sum();
        v.push(-s);
        v
    })
}

fn weight_rows(n: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(zero_sum(n, -3, 3), 0..=max)
}

fn permutation(n: usize) -> impl Strategy<Value = Perm> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Perm::from_images(&images).unwrap())
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn smith_form_round_trip(rows in matrix()) {
        let m = IntegerMatrix::from_rows(&rows).unwrap();
        let snf = smith_normal_form(&m).unwrap();
        prop_assert_eq!(snf.left.mul(&m).unwrap().mul(&snf.right).unwrap(), snf.diagonal.clone());
        let d = snf.diagonal.clone();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    prop_assert_eq!(d.get(i, j), 0);
                }
            }
        }
        let factors = snf.invariant_factors();
        prop_assert!(factors.iter().all(|&x| x > 0));
        prop_assert!(factors.windows(2).all(|w| w[1] % w[0] == 0));
        prop_assert_eq!(factors, lattice::invariant_factors(&m).unwrap());
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn standard_weights_are_antisymmetric(n in 2usize..=9, i in 1usize..=9, j in 1usize..=9, q in prop::sample::select(vec![0u64, 2, 3, 4, 9])) {
        prop_assume!(i <= n && j <= n && i != j);
        let spec = LatticeSpec::zero_sum(n, q).unwrap();
        let sum = standard_weight(i, j, spec).unwrap().add(&standard_weight(j, i, spec).unwrap()).unwrap();
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn relation_count_matches_rank(n in 2usize..=5, rows in weight_rows(5, 8)) {
        let spec = LatticeSpec::zero_sum(n, 0).unwrap();
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|mut r| {
            let tail: i64 = r[n - 1..].iter().sum();
            r.truncate(n);
            r[n - 1] = tail;
            r
        }).collect();
        let lambda = WeightSet::from_entries(spec, &rows).unwrap();
        let rank = span_rank(&lambda).unwrap();
        let kernel = lattice::kernel_basis(&lambda).unwrap();
        prop_assert_eq!(kernel.len(), lambda.len() - rank);
        prop_assert_eq!(rational_kernel_basis(&lambda).unwrap().len(), lambda.len() - rank);
        for v in kernel.basis.iter().chain(&rational_kernel_basis(&lambda).unwrap().basis) {
            prop_assert!(lattice::in_kernel(&lambda, v).unwrap());
        }
        if lattice::spans(&lambda).unwrap() {
            prop_assert_eq!(rank, n - 1);
        }
    }

    #[test]
    fn reduction_and_lifting_agree(n in 2usize..=4, q in prop::sample::select(vec![2u64, 3, 4, 9]), rows in weight_rows(4, 5)) {
        let spec = LatticeSpec::zero_sum(n, q).unwrap();
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|mut r| {
            let tail: i64 = r[n - 1..].iter().sum();
            r.truncate(n);
            r[n - 1] = tail;
            r
        }).collect();
        let lambda = WeightSet::from_entries(spec, &rows).unwrap();
        let lifted = lattice::spans(&lambda).unwrap();
        prop_assert_eq!(lifted, lattice::spans_by_reduction(&lambda).unwrap());
        if q == 4 || q == 9 {
            let p = if q == 4 { 2 } else { 3 };
            if lifted {
                prop_assert!(lattice::spans(&lambda.reduce_mod(p).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn action_is_a_left_action(n in 1usize..=8, seed in any::<u64>()) {
        let spec = LatticeSpec::zero_sum(n, 0).unwrap();
        let mut entries: Vec<i64> = (0..n).map(|k| ((seed >> (3 * k)) & 7) as i64 - 3).collect();
        let s: i64 = entries[..n - 1].iter().sum();
        entries[n - 1] = -s;
        let w = Weight::new(entries, spec).unwrap();
        let images: Vec<usize> = (0..n).map(|k| (k + (seed as usize % n)) % n + 1).collect();
        let g = Perm::from_images(&images).unwrap();
        let h = g.inverse();
        prop_assert_eq!(permgroup::act(&g.compose(&h), &w).unwrap(), w.clone());
        prop_assert_eq!(
            permgroup::act(&g.compose(&g), &w).unwrap(),
            permgroup::act(&g, &permgroup::act(&g, &w).unwrap()).unwrap()
        );
    }

    #[test]
    fn composition_law_for_random_permutations((g, h, w) in (1usize..=7).prop_flat_map(|n| (permutation(n), permutation(n), zero_sum(n.max(1), -4, 4)))) {
        let n = g.degree();
        let spec = LatticeSpec::zero_sum(n, 0).unwrap();
        let w = Weight::new(w[..n.max(1)].to_vec(), spec);
        prop_assume!(w.is_ok());
        let w = w.unwrap();
        prop_assert_eq!(
            permgroup::act(&g.compose(&h), &w).unwrap(),
            permgroup::act(&g, &permgroup::act(&h, &w).unwrap()).unwrap()
        );
    }

    #[test]
    fn orbits_are_invariant_and_divide_the_order(n in 1usize..=8, p in prop::sample::select(vec![2u64, 3]), w in zero_sum(8, -2, 2)) {
        let group = sylow_subgroup(n, p).unwrap();
        let spec = LatticeSpec::zero_sum(n, 0).unwrap();
        let mut entries = w[..n].to_vec();
        let s: i64 = entries[..n - 1].iter().sum();
        entries[n - 1] = -s;
        let w = Weight::new(entries, spec).unwrap();
        let orbit = permgroup::orbit(&group, &w).unwrap();
        prop_assert!(group.fixes_lambda(&orbit).unwrap());
        let order = p.pow(group.order_exponent.unwrap() as u32);
        prop_assert_eq!(order % orbit.len() as u64, 0);
    }
}
