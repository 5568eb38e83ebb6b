use num_bigint::BigInt;
use num_rational::BigRational;
use polycount::counts::{
    count_irreducible_degree, count_irreducible_multi, eval_count, irreducible_from_log, log_series,
};
use polycount::oracle::{
    census_irreducible_univariate, compose, enumerate_monic, uniqueness_audit, FqMPoly,
};
use polycount::qalg::divisors;
use polycount::{QPoly, ZSeries};

#[test]
fn irreducible_counts_are_nonnegative_integers() {
    for nu in [2u32, 3] {
        let log = log_series(nu, 12).unwrap();
        for n in 1..=12 {
            let i = irreducible_from_log(&log, n).unwrap();
            for p in [2u64, 3, 5] {
                assert!(
                    eval_count(&i, p).unwrap() >= BigInt::from(0),
                    "nu={nu} n={n} p={p}"
                );
            }
        }
    }
}

#[test]
fn log_coefficients_decompose_into_irreducible_counts() {
    for nu in [2u32, 3] {
        let log = log_series(nu, 20).unwrap();
        let counts: Vec<QPoly> = (1..=20)
            .map(|n| irreducible_from_log(&log, n).unwrap().value())
            .collect();
        for n in 1..=20usize {
            let mut acc = QPoly::zero();
            for k in divisors(n as u64) {
                acc += &counts[n / k as usize - 1]
                    .scale(&BigRational::new(1.into(), (k as i64).into()));
            }
            assert_eq!(&acc, log.coeff(n).unwrap(), "nu={nu} n={n}");
        }
    }
    assert_eq!(
        count_irreducible_degree(2, 7).unwrap(),
        irreducible_from_log(&log_series(2, 7).unwrap(), 7).unwrap()
    );
}

fn permutations(v: &[u32]) -> Vec<Vec<u32>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[test]
fn multidegree_counts_are_symmetric() {
    for a in 0..=4u32 {
        for b in 0..=a {
            for c in 0..=b {
                if a == 0 {
                    continue;
                }
                let base = count_irreducible_multi(&[a, b, c]).unwrap();
                for p in permutations(&[a, b, c]) {
                    assert_eq!(count_irreducible_multi(&p).unwrap(), base, "{p:?}");
                }
            }
            if a > 0 {
                let base = count_irreducible_multi(&[a, b]).unwrap();
                assert_eq!(count_irreducible_multi(&[b, a]).unwrap(), base);
            }
        }
    }
}

#[test]
fn geometric_log_matches_univariate_census() {
    // 1 + N = 1/(1 - qz)
    let n = ZSeries::new((1..=12).map(QPoly::q_pow).collect()).unwrap();
    let l = n.log1p();
    for m in 1..=12u32 {
        let i = l.mobius_invert_coeff(m as usize).unwrap();
        let census = census_irreducible_univariate(2, m).unwrap();
        assert_eq!(
            i.eval_integer(&BigInt::from(2)),
            Some(BigInt::from(census.count)),
            "n={m}"
        );
    }
}

#[test]
fn monic_products_stay_monic() {
    for p in [2u32, 3] {
        let deg1: Vec<FqMPoly> = enumerate_monic(p, 2, 1).unwrap().collect();
        let deg2: Vec<FqMPoly> = enumerate_monic(p, 2, 2).unwrap().step_by(5).collect();
        for a in &deg1 {
            for b in &deg2 {
                let ab = a.mul(b).unwrap();
                assert!(ab.is_monic());
                assert_eq!(ab.total_degree(), Some(3));
            }
        }
    }
}

#[test]
fn composition_multiplies_degrees() {
    let inner: Vec<FqMPoly> = enumerate_monic(3, 2, 2).unwrap().step_by(11).collect();
    for q in &inner {
        for h in [&[1i64, 0, 1][..], &[0, 2, 1, 2], &[2, 0, 0, 0, 1]] {
            let r = compose(h, q).unwrap();
            assert_eq!(r.total_degree(), Some(2 * (h.len() as u32 - 1)));
        }
    }
}

#[test]
fn decompositions_are_unique_in_degree_four() {
    let a = uniqueness_audit(2, 2, 4).unwrap();
    assert!(a.is_unique(), "{a:?}");
    let b = uniqueness_audit(3, 2, 3).unwrap();
    assert!(b.is_unique(), "{b:?}");
}
