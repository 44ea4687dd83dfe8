use std::collections::BTreeSet;

use dlcoh::field::FieldSpec;
use dlcoh::flag::{
    enumerate_cosets, group_order, levi_composition, parabolic_index, steinberg_dim, FlagCoset,
    FqMatrix,
};
use dlcoh::weyl::GeneratorSet;
use num_bigint::BigUint;
use proptest::prelude::*;

/// Every `n x n` matrix over `F_q` (as row lists), `q` prime.
fn all_matrices(n: usize, q: u32) -> impl Iterator<Item = Vec<Vec<u32>>> {
    let total = (q as u64).pow((n * n) as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let x = (code % q as u64) as u32;
                        code /= q as u64;
                        x
                    })
                    .collect()
            })
            .collect()
    })
}

/// Rank over the prime field `F_q` by plain Gaussian elimination.
fn rank_mod(mut m: Vec<Vec<u32>>, q: u32) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let inv = |a: u32| (1..q).find(|&b| a * b % q == 1).unwrap();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let f = inv(m[rank][c]);
        for x in &mut m[rank] {
            *x = *x * f % q;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let k = m[r][c];
                for j in 0..cols {
                    m[r][j] = (m[r][j] + (q - k) * m[rank][j]) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn invertible(n: usize, q: u32) -> Vec<FqMatrix> {
    all_matrices(n, q)
        .filter(|m| rank_mod(m.clone(), q) == n)
        .map(|m| FqMatrix::from_rows(m).unwrap())
        .collect()
}

#[test]
fn group_order_matches_enumeration() {
    for (n, q) in [(1, 2), (2, 2), (2, 3), (3, 2), (2, 5)] {
        let count = all_matrices(n, q).filter(|m| rank_mod(m.clone(), q) == n).count();
        assert_eq!(group_order(n, q as u64), BigUint::from(count), "n={n} q={q}");
    }
    assert_eq!(group_order(3, 3), BigUint::from(11_232u32));
}

#[test]
fn cosets_are_the_orbit_of_the_group() {
    for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let field = FieldSpec::from_order(q as u64).unwrap();
        let group = invertible(n, q);
        for i in GeneratorSet::all_subsets(n) {
            let orbit: BTreeSet<FlagCoset> = group
                .iter()
                .map(|g| FlagCoset::from_group_element(g, &i, &field).unwrap())
                .collect();
            let enumerated = enumerate_cosets(n, &field, &i, 1_000_000).unwrap();
            assert_eq!(enumerated.iter().cloned().collect::<BTreeSet<_>>(), orbit);
            assert_eq!(BigUint::from(orbit.len()), parabolic_index(n, q as u64, &i).unwrap());
            // stabiliser order times orbit size is the group order
            assert_eq!(group.len() % orbit.len(), 0);
        }
    }
}

/// `prod (q^n - q^i) / (q^k - q^i)` over `i < k`.
fn grassmannian(n: u32, k: u32, q: u64) -> u64 {
    (0..k).map(|i| q.pow(n) - q.pow(i)).product::<u64>()
        / (0..k).map(|i| q.pow(k) - q.pow(i)).product::<u64>()
}

#[test]
fn multinomials_factor_through_grassmannians() {
    for q in [2u64, 3, 4, 5] {
        for n in 1..=5usize {
            for i in GeneratorSet::all_subsets(n) {
                let parts = levi_composition(&i, n).unwrap().parts().to_vec();
                let mut left = n as u32;
                let mut expected = 1u64;
                for &a in &parts {
                    expected *= grassmannian(left, a as u32, q);
                    left -= a as u32;
                }
                assert_eq!(parabolic_index(n, q, &i).unwrap(), BigUint::from(expected));
            }
        }
    }
}

#[test]
fn enumeration_counts_for_all_parabolics() {
    for q in [2u64, 3, 4] {
        let field = FieldSpec::from_order(q).unwrap();
        for n in 1..=4 {
            for i in GeneratorSet::all_subsets(n) {
                let cosets = enumerate_cosets(n, &field, &i, 100_000).unwrap();
                assert_eq!(BigUint::from(cosets.len()), parabolic_index(n, q, &i).unwrap());
                assert!(cosets.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}

#[test]
fn steinberg_dimension_is_levi_unipotent_order() {
    // q^(sum a(a-1)/2) over the Levi blocks
    for n in 1..=5 {
        for i in GeneratorSet::all_subsets(n) {
            let parts = levi_composition(&i, n).unwrap().parts().to_vec();
            let e: u32 = parts.iter().map(|&a| (a * (a - 1) / 2) as u32).sum();
            assert_eq!(steinberg_dim(&i, n, 3).unwrap(), BigUint::from(3u32.pow(e)));
        }
    }
}

#[test]
fn bound_is_enforced() {
    let field = FieldSpec::from_order(3).unwrap();
    let r = enumerate_cosets(4, &field, &GeneratorSet::empty(), 100);
    assert!(matches!(r, Err(dlcoh::Error::CosetBoundExceeded { .. })));
}

/// `F_9 = F_3[i]/(i^2 + 1)` written out by hand; element `a + b i` is `a + 3b`.
fn f9_mul(x: u32, y: u32) -> u32 {
    let (a, b, c, d) = (x % 3, x / 3, y % 3, y / 3);
    let re = (a * c + 2 * b * d) % 3;
    let im = (a * d + b * c) % 3;
    re + 3 * im
}

#[test]
fn f9_multiplication_table() {
    let f = FieldSpec::new(3, 2, Some(&[1, 0, 1])).unwrap();
    for x in 0..9 {
        for y in 0..9 {
            assert_eq!(f.mul(x, y), f9_mul(x, y));
        }
    }
}

fn random_matrix(n: usize, q: u32) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0..q, n), n)
}

/// Block upper-triangular invertible matrix of the Levi type of `i`.
fn parabolic_element(raw: &[Vec<u32>], i: &GeneratorSet, field: &FieldSpec) -> FqMatrix {
    let n = raw.len();
    let cuts = levi_composition(i, n).unwrap().partial_sums();
    let block = |r: usize| cuts.iter().position(|&c| r < c).unwrap();
    let mut rows: Vec<Vec<u32>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if block(c) >= block(r) { raw[r][c] } else { 0 })
                .collect()
        })
        .collect();
    // force invertibility: unit diagonal inside each block's lower-left cleared part
    for (r, row) in rows.iter_mut().enumerate() {
        for c in 0..n {
            if block(c) == block(r) && c < r {
                row[c] = 0;
            }
        }
        if row[r] == 0 {
            row[r] = 1;
        }
    }
    let p = FqMatrix::from_rows(rows).unwrap();
    assert!(p.is_invertible(field));
    p
}

proptest! {
    #[test]
    fn coset_ignores_right_multiplication_by_parabolic(
        g in random_matrix(4, 3),
        p in random_matrix(4, 3),
        mask in 0u32..8,
    ) {
        let field = FieldSpec::from_order(3).unwrap();
        let g = FqMatrix::from_rows(g).unwrap();
        prop_assume!(g.is_invertible(&field));
        let i: GeneratorSet = (1..4).filter(|s| mask & (1 << (s - 1)) != 0).collect();
        let pm = parabolic_element(&p, &i, &field);
        let gp = g.mul(&pm, &field).unwrap();
        let a = FlagCoset::from_group_element(&g, &i, &field).unwrap();
        let b = FlagCoset::from_group_element(&gp, &i, &field).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(FlagCoset::from_text(&a.to_text(3), 3).unwrap(), a.clone());

        // projection commutes with taking cosets
        let full = GeneratorSet::full(4);
        let fine = FlagCoset::from_group_element(&g, &GeneratorSet::empty(), &field).unwrap();
        prop_assert_eq!(fine.project(&i).unwrap(), a);
        prop_assert_eq!(
            fine.project(&full).unwrap(),
            FlagCoset::from_group_element(&g, &full, &field).unwrap()
        );
    }

    #[test]
    fn field_inverse_and_distributivity(a in 0u32..27, b in 0u32..27, c in 0u32..27) {
        let f = FieldSpec::from_order(27).unwrap();
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
    }
}

#[test]
fn text_format_example() {
    let field = FieldSpec::from_order(2).unwrap();
    let g = FqMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap();
    let x = FlagCoset::from_group_element(&g, &GeneratorSet::empty(), &field).unwrap();
    assert_eq!(x.to_text(2), "type 1,1\n1: 01\n2: 10 01\n");
}
