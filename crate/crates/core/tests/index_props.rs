mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sympindex::index::{
    find_gap_m, gap_lower_bound, iterate, iterate_block, BlockPath, Decomposition,
};
use sympindex::symplectic::{
    classify, diamond, elliptic_height, NormalFormBlock, SymplecticMatrix, DEFAULT_CLUSTER_TOL,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn block_formula_matches_walker(seed in any::<u64>(), i1 in -6i64..=6) {
        let mut r = rng(seed);
        let bp = BlockPath { block: random_block(&mut r), i1 };
        for m in 1..=20 {
            let it = iterate_block(&bp, m).unwrap();
            prop_assert_eq!(it.i_minus1, walker_index(&bp, m), "block {:?}, m = {}", bp, m);
        }
    }

    #[test]
    fn block_nullity_matches_kernels(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bp = BlockPath { block: random_block(&mut r), i1: 1 };
        for m in 1..=8 {
            let it = iterate_block(&bp, m).unwrap();
            if !it.boundary_warning {
                prop_assert_eq!(it.nu_minus1 as usize, walker_nullity(&bp.block, m), "block {:?}, m = {}", bp, m);
            }
        }
    }

    #[test]
    fn gap_inequality(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let d = random_decomposition(&mut r, n, -4..=6);
        for m in 1..=20 {
            let (lhs, rhs) = gap_lower_bound(&d, m).unwrap();
            prop_assert!(lhs >= rhs, "{:?} m = {}: {} < {}", d, m, lhs, rhs);
        }
    }

    #[test]
    fn nullity_bounded_by_dimension(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let d = random_decomposition(&mut r, n, -2..=2);
        for m in 1..=10 {
            prop_assert!(iterate(&d, m).unwrap().nu_minus1 as usize <= 2 * n);
        }
    }

    #[test]
    fn index_nondecreasing_when_i1_at_least_n(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let mut d = random_decomposition(&mut r, n, 0..=3);
        if d.total_i1() < n as i64 {
            let blocks: Vec<NormalFormBlock> = d.blocks().iter().map(|b| b.block).collect();
            d = Decomposition::with_total_i1(&blocks, n as i64).unwrap();
        }
        let mut prev = iterate(&d, 1).unwrap().i_minus1;
        for m in 2..=20 {
            let cur = iterate(&d, m).unwrap().i_minus1;
            prop_assert!(cur >= prev, "{:?}: i({}) = {} < {}", d, m, cur, prev);
            prev = cur;
        }
    }

    #[test]
    fn gap_search_is_bounded(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let d = random_gap_decomposition(&mut r, n);
        let rotations = d
            .blocks()
            .iter()
            .filter(|b| matches!(b.block, NormalFormBlock::Rotation2 { .. } | NormalFormBlock::Rotation4 { .. }))
            .count() as u32;
        let m = find_gap_m(&d, 50).unwrap();
        prop_assert!(m <= 10 * (rotations + 1), "{:?}: m = {}", d, m);
    }

    #[test]
    fn classify_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let d = random_decomposition(&mut r, n, 0..=0);
        let m = d.realize();
        let blocks = classify(&m, DEFAULT_CLUSTER_TOL).unwrap();
        let again = Decomposition::with_total_i1(&blocks, 3).unwrap();
        let orig: Vec<NormalFormBlock> = d.blocks().iter().map(|b| b.block).collect();
        let orig = Decomposition::with_total_i1(&orig, 3).unwrap();
        // Same normal form up to ordering: equal indices and nullities at every iterate.
        for k in 1..=6 {
            prop_assert_eq!(iterate(&again, k).unwrap().i_minus1, iterate(&orig, k).unwrap().i_minus1);
            prop_assert_eq!(iterate(&again, k).unwrap().nu_minus1, iterate(&orig, k).unwrap().nu_minus1);
        }
        prop_assert_eq!(again.elliptic_height(), orig.elliptic_height());
    }

    #[test]
    fn diamond_associative_and_height_additive(s1 in any::<u64>()) {
        let mut r = rng(s1);
        let a = random_block(&mut r).realize();
        let b = random_block(&mut r).realize();
        let c = random_block(&mut r).realize();
        let left = diamond(&diamond(&a, &b).unwrap(), &c).unwrap();
        let right = diamond(&a, &diamond(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.matrix(), right.matrix());
        let sum = elliptic_height(&a) + elliptic_height(&b) + elliptic_height(&c);
        prop_assert_eq!(elliptic_height(&left), sum);
    }
}

#[test]
fn identity_is_symplectic_and_neutral() {
    let a = NormalFormBlock::rotation2(sympindex::symplectic::Angle::pi_ratio(1, 3).unwrap())
        .unwrap()
        .realize();
    let id = SymplecticMatrix::identity(1);
    let ai = diamond(&a, &id).unwrap();
    assert_eq!(ai.dim_half(), 2);
    assert_eq!(elliptic_height(&ai), 4);
}
