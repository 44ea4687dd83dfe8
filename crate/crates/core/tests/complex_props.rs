use dlcoh::complex::{
    build_stseq, build_stseq_with, homology, inclusion_matrix, ChainComplex, ComplexExport, Ring,
    SignConvention,
};
use dlcoh::field::FieldSpec;
use dlcoh::flag::levi_composition;
use dlcoh::snf::IntMatrix;
use dlcoh::weyl::GeneratorSet;
use dlcoh::word::Word;
use dlcoh::Error;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

const BOUND: usize = 100_000;

fn field(q: u64) -> FieldSpec {
    FieldSpec::from_order(q).unwrap()
}

/// `[n]_q! / prod [a]_q!` over the Levi blocks of `i`.
fn gaussian_multinomial(n: usize, q: u64, i: &GeneratorSet) -> u64 {
    let qfact = |k: usize| -> u64 {
        (1..=k as u32)
            .map(|j| (q.pow(j) - 1) / (q - 1))
            .product()
    };
    let parts = levi_composition(i, n).unwrap().parts().to_vec();
    qfact(n) / parts.iter().map(|&a| qfact(a)).product::<u64>()
}

/// `q^N` with `N` the number of positive roots of the Levi of `i`.
fn levi_unipotent(n: usize, q: u64, i: &GeneratorSet) -> u64 {
    let parts = levi_composition(i, n).unwrap().parts().to_vec();
    q.pow(parts.iter().map(|&a| (a * (a - 1) / 2) as u32).sum())
}

/// Rank of an integer matrix reduced modulo the prime `p`.
fn rank_mod(m: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = m
        .to_dense()
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| (((v % &pb) + &pb) % &pb).to_u64().unwrap())
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow(a[rank][c], p - 2);
        let pivot_row: Vec<u64> = a[rank]
            .iter()
            .map(|&x| (x as u128 * inv as u128 % p as u128) as u64)
            .collect();
        for row in a.iter_mut().skip(rank + 1) {
            let k = row[c];
            if k != 0 {
                for j in c..cols {
                    let sub = (k as u128 * pivot_row[j] as u128 % p as u128) as u64;
                    row[j] = (row[j] + p - sub) % p;
                }
            }
        }
        a[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// `dim H^i` over `F_p` straight from the ranks of the reduced boundaries.
fn mod_p_betti(c: &ChainComplex, p: u64) -> Vec<usize> {
    let ranks: Vec<usize> = c.boundaries.iter().map(|d| rank_mod(d, p)).collect();
    c.ranks()
        .iter()
        .enumerate()
        .map(|(i, &ci)| {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i == 0 { 0 } else { ranks[i - 1] };
            ci - out - inc
        })
        .collect()
}

fn sweep(max_n: usize) -> Vec<Word> {
    (2..=max_n).flat_map(Word::all_distinct_letter_words).collect()
}

#[test]
fn term_ranks_are_sums_of_gaussian_multinomials() {
    for q in [2u64, 3, 4] {
        let f = field(q);
        for w in sweep(4) {
            let c = build_stseq(&w, &f, BOUND).unwrap();
            let len = w.len();
            for (i, &rank) in c.ranks().iter().enumerate() {
                let expected: u64 = (0..len)
                    .combinations(len - i)
                    .map(|pos| {
                        let i: GeneratorSet = pos.iter().map(|&k| w.letters()[k]).collect();
                        gaussian_multinomial(w.rank(), q, &i)
                    })
                    .sum();
                assert_eq!(rank as u64, expected, "{w} q={q} degree {i}");
            }
        }
    }
}

#[test]
fn euler_characteristic_is_signed_steinberg_dimension() {
    for q in [2u64, 3] {
        let f = field(q);
        for w in sweep(4) {
            let c = build_stseq(&w, &f, BOUND).unwrap();
            let i = w.support();
            let st = (gaussian_multinomial(w.rank(), q, &i) * levi_unipotent(w.rank(), q, &i)) as i128;
            let sign = if w.len() % 2 == 0 { 1 } else { -1 };
            assert_eq!(c.euler_characteristic(), sign * st, "{w} q={q}");
        }
    }
}

#[test]
fn boundaries_compose_to_zero() {
    for q in [2u64, 3, 4] {
        let f = field(q);
        for w in sweep(4) {
            let c = build_stseq(&w, &f, BOUND).unwrap();
            for k in 1..c.boundaries.len() {
                assert!(c.boundaries[k].mul(&c.boundaries[k - 1]).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn mod_p_homology_matches_direct_elimination() {
    let cases: Vec<(u64, usize)> = vec![(2, 4), (3, 3), (4, 3)];
    for (q, max_n) in cases {
        let f = field(q);
        for w in sweep(max_n) {
            let c = build_stseq(&w, &f, BOUND).unwrap();
            for p in [2u64, 3, 5] {
                let direct = mod_p_betti(&c, p);
                let h = homology(&c).degrees;
                let via_uct = dlcoh::complex::BoundaryDivisors::of(&c)
                    .homology(Ring::mod_prime_power(p, 1).unwrap());
                for (i, d) in via_uct.degrees.iter().enumerate() {
                    let dim = d.homology.free_rank + d.homology.torsion.len();
                    assert_eq!(dim, direct[i], "{w} q={q} p={p} degree {i}");
                }
                let top = w.len();
                assert!(direct[..top].iter().all(|&b| b == 0));
                assert_eq!(h[top].homology.free_rank, direct[top]);
            }
            // over Q, via a large prime
            let rational = mod_p_betti(&c, 1_000_000_007);
            let h = homology(&c);
            for (i, d) in h.degrees.iter().enumerate() {
                assert_eq!(d.homology.free_rank, rational[i]);
            }
        }
    }
}

#[test]
fn inclusion_matrices_are_projections() {
    let f = field(3);
    for big in GeneratorSet::all_subsets(4) {
        for small in GeneratorSet::all_subsets(4).into_iter().filter(|s| s.is_subset(&big)) {
            let m = inclusion_matrix(4, &f, &big, &small, BOUND).unwrap();
            let fibre = gaussian_multinomial(4, 3, &small) / gaussian_multinomial(4, 3, &big);
            let mut sums = vec![0u64; m.cols()];
            for r in 0..m.rows() {
                let row = m.row(r);
                assert_eq!(row.len(), 1);
                assert!(row[0].1.is_one());
                sums[row[0].0] += 1;
            }
            assert!(sums.iter().all(|&s| s == fibre));
        }
    }
}

#[test]
fn sign_conventions() {
    let f = field(2);
    for w in sweep(4) {
        let default = build_stseq_with(&w, &f, BOUND, SignConvention::SubwordPosition).unwrap();
        let zero = build_stseq_with(&w, &f, BOUND, SignConvention::ZeroBased).unwrap();
        assert!(zero.is_complex());
        for (a, b) in default.boundaries.iter().zip(&zero.boundaries) {
            for (r, c, v) in a.triplets() {
                assert_eq!(b.get(r, c), -v);
            }
            assert_eq!(a.nnz(), b.nnz());
        }
        let word_pos = build_stseq_with(&w, &f, BOUND, SignConvention::WordPosition).unwrap();
        assert_eq!(word_pos.is_complex(), w.len() < 2, "{w}");
    }
}

#[test]
fn exports_round_trip() {
    let f = field(3);
    for w in sweep(3) {
        let c = build_stseq(&w, &f, BOUND).unwrap();
        let json = serde_json::to_string(&c.to_export().unwrap()).unwrap();
        let back: ComplexExport = serde_json::from_str(&json).unwrap();
        assert_eq!(ChainComplex::from_export(&back).unwrap(), c);

        // the text form lists every nonzero entry once
        let text = c.to_text();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("degree rank"));
        for t in &c.terms {
            assert_eq!(lines.next().unwrap(), format!("{} {}", t.degree, t.rank));
        }
        for (i, d) in c.boundaries.iter().enumerate() {
            assert_eq!(lines.next().unwrap(), format!("d {} {} {}", i, d.rows(), d.cols()));
            let triplets: Vec<(usize, usize, BigInt)> = (0..d.nnz())
                .map(|_| {
                    let parts: Vec<&str> = lines.next().unwrap().split(' ').collect();
                    (parts[0].parse().unwrap(), parts[1].parse().unwrap(), parts[2].parse().unwrap())
                })
                .collect();
            assert_eq!(&IntMatrix::from_triplets(d.rows(), d.cols(), triplets).unwrap(), d);
        }
        assert_eq!(lines.next(), None);
    }
}

#[test]
fn rejected_inputs() {
    let f = field(2);
    assert!(matches!(build_stseq(&Word::new(vec![], 3).unwrap(), &f, BOUND), Err(Error::EmptyWord)));
    assert!(matches!(
        build_stseq(&Word::new(vec![1, 2, 1], 3).unwrap(), &f, BOUND),
        Err(Error::RepeatedLetters)
    ));
    assert!(matches!(
        build_stseq(&Word::new(vec![1, 2, 3], 4).unwrap(), &field(3), 10),
        Err(Error::CosetBoundExceeded { .. })
    ));
    assert!(Ring::mod_prime_power(4, 1).is_err());
    assert!(Ring::mod_prime_power(3, 0).is_err());
}
