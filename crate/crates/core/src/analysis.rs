//! Failure-probability bounds, exact small-case references, and Monte Carlo
//! validation for the collaborative decoders.
//!
//! All closed-form quantities are computed in exact big-rational arithmetic
//! and rendered to decimal only at the edges: binomials up to C(204, t) and
//! powers like 256^-15 are far outside double precision's exact range.

use crate::collab::{self, DecodeStatus};
use crate::field::TowerSpec;
use crate::gabidulin::{gab_decode, psi_rank, GabidulinCode};
use crate::linalg::{self, Matrix};
use crate::rng::SplitMix64;
use crate::rs::IRSCode;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// q^e as an exact rational, e possibly negative.
fn pow_rat(q: u64, e: i64) -> BigRational {
    let p = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigUint::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    BigInt::from(acc)
}

/// Upper bound on the collaborative IRS failure probability for f uniform
/// independent-or-not error rows: 0 below f=2, q^-(l+1-f) inside the
/// correcting radius, 1 beyond it.
pub fn p_fail_bound_irs(f: usize, l: usize, q: u64, d: usize) -> BigRational {
    if f < 2 {
        BigRational::zero()
    } else if f <= collab::f_max(l, d) {
        pow_rat(q, -((l + 1 - f) as i64))
    } else {
        BigRational::one()
    }
}

/// Exact probability that f vectors drawn uniformly from the q^l - 1
/// nonzero vectors of GF(q)^l are linearly dependent:
/// 1 - prod_{i=1..f-1} (q^l - q^i) / (q^l - 1).
pub fn p_dep_exact(f: usize, l: usize, q: u64) -> BigRational {
    assert!(f >= 1);
    if f > l {
        return BigRational::one();
    }
    let ql = pow_rat(q, l as i64);
    let denom = &ql - BigRational::one();
    let mut prod = BigRational::one();
    for i in 1..f {
        prod *= (&ql - pow_rat(q, i as i64)) / &denom;
    }
    BigRational::one() - prod
}

/// Rank-metric analogue of the IRS failure bound: 4·(q^m)^-(l+1-f) inside
/// the radius, capped at 1.
pub fn p_fail_bound_gab(f: usize, l: usize, q: u64, m: u32, d: usize) -> BigRational {
    if f < 2 {
        return BigRational::zero();
    }
    if f > collab::f_max(l, d) {
        return BigRational::one();
    }
    let v = rat(4, 1) * pow_rat(q.pow(m), -((l + 1 - f) as i64));
    if v > BigRational::one() {
        BigRational::one()
    } else {
        v
    }
}

/// Frame error rate bound for the concatenated channel: every code position
/// fails independently with inner rate p, and a frame with t bad rows fails
/// with probability at most p_fail_bound_irs(t, l, q):
/// sum_{t=2..N} C(N,t) · P_f(t,l) · p^t · (1-p)^{N-t}.
pub fn fer_bound(p: &BigRational, n: u64, l: usize, q: u64, d: usize) -> Option<BigRational> {
    if p < &BigRational::zero() || p > &BigRational::one() {
        return None;
    }
    Some(fer_sum(p, n, |t| p_fail_bound_irs(t, l, q, d)))
}

/// Same summation against the exact dependence probability (clipped to 1
/// beyond the correcting radius) instead of the bound.
pub fn fer_exact(p: &BigRational, n: u64, l: usize, q: u64, d: usize) -> BigRational {
    let fmax = collab::f_max(l, d);
    fer_sum(p, n, |t| {
        if t > fmax {
            BigRational::one()
        } else {
            p_dep_exact(t, l, q)
        }
    })
}

fn fer_sum(p: &BigRational, n: u64, term: impl Fn(usize) -> BigRational) -> BigRational {
    let one = BigRational::one();
    let q1 = &one - p;
    if q1.is_zero() {
        // only the all-rows-bad term survives
        return term(n as usize);
    }
    let mut acc = BigRational::zero();
    // p^t rises, (1-p)^(N-t) falls; keep both as running powers
    let mut pt = p * p;
    let mut qt = BigRational::one();
    for _ in 0..n - 2 {
        qt *= &q1;
    }
    for t in 2..=n {
        let w = term(t as usize);
        if !w.is_zero() {
            acc += BigRational::from_integer(binomial(n, t)) * &w * &pt * &qt;
        }
        if t < n {
            pt *= p;
            if !q1.is_zero() {
                qt /= &q1;
            }
        }
    }
    acc
}

/// Parses a plain decimal literal ("0.02", "1", ".5") into an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(BigInt::from(sign) * num, den))
}

/// Scientific-notation rendering with `sig` significant digits, computed by
/// exact long division (no float detour).
pub fn decimal_string(r: &BigRational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let (num, den) = (a.numer().clone(), a.denom().clone());
    // initial exponent estimate from digit counts, then correct it
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10);
    loop {
        // scaled = round(a. * 10^(sig-1-e)) should have exactly `sig` digits
        let shift = sig as i64 - 1 - e;
        let (sn, sd) = if shift >= 0 {
            (&num * ten.pow(shift as u32), den.clone())
        } else {
            (num.clone(), &den * ten.pow((-shift) as u32))
        };
        let scaled: BigInt = (&sn + &sd / 2) / &sd;
        let digits = scaled.to_string();
        if digits.len() > sig {
            e += 1;
            continue;
        }
        if digits.len() < sig {
            e -= 1;
            continue;
        }
        let mantissa = if sig == 1 {
            digits
        } else {
            format!("{}.{}", &digits[..1], &digits[1..])
        };
        let sign = if neg { "-" } else { "" };
        return format!("{sign}{mantissa}e{e}");
    }
}

/// Wilson score interval for x successes in n trials at critical value z.
pub fn wilson_interval(x: u64, n: u64, z: f64) -> (f64, f64) {
    assert!(n > 0);
    let nf = n as f64;
    let p = x as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Aggregated Monte Carlo outcome. `estimate` covers everything the bounds
/// cover: detected failures plus miscorrections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureEstimate {
    pub trials: u64,
    pub failures: u64,
    pub miscorrections: u64,
    pub seed: u64,
}

impl FailureEstimate {
    pub fn bad(&self) -> u64 {
        self.failures + self.miscorrections
    }

    pub fn estimate(&self) -> BigRational {
        rat(self.bad() as i64, self.trials as i64)
    }

    pub fn estimate_f64(&self) -> f64 {
        self.bad() as f64 / self.trials as f64
    }

    pub fn wilson(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.bad(), self.trials, z)
    }
}

fn nonzero_vector(field: &crate::field::FieldSpec, l: usize, rng: &mut SplitMix64) -> Vec<crate::field::FieldElement> {
    let q = field.size() as u64;
    loop {
        let v: Vec<_> = (0..l)
            .map(|_| field.element(rng.next_below(q) as u32).unwrap())
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Per-trial classification of a decode of a pure error matrix (the zero
/// codeword is representative by linearity).
fn classify(out_status: DecodeStatus, exact: bool, est: &mut FailureEstimate) {
    match out_status {
        DecodeStatus::Success if exact => {}
        DecodeStatus::Success => est.miscorrections += 1,
        DecodeStatus::DetectedFailure(_) => est.failures += 1,
    }
}

/// Monte Carlo failure rate for f uniform nonzero error rows at distinct
/// uniform positions. Deterministic given (seed, trial index).
pub fn mc_irs_failure(code: &IRSCode, f: usize, trials: u64, seed: u64) -> FailureEstimate {
    let inner = code.inner();
    let field = inner.field();
    let mut est = FailureEstimate { trials, failures: 0, miscorrections: 0, seed };
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let positions = rng.distinct_below(inner.n(), f);
        let mut e = Matrix::zero(field, inner.n(), code.l());
        for &pos in &positions {
            for (t, x) in nonzero_vector(field, code.l(), &mut rng).into_iter().enumerate() {
                e.set(pos, t, x);
            }
        }
        let out = collab::decode(code, &e, false).expect("shape is valid by construction");
        let exact = out
            .codeword
            .as_ref()
            .map(|c| c.is_zero())
            .unwrap_or(false);
        classify(out.status, exact, &mut est);
    }
    est
}

/// Pure dependence-event Monte Carlo: draw f uniform nonzero vectors of GF(q)^l and
/// count dependent draws. This isolates the event the failure bounds model,
/// without requiring any code with n >= f to exist over GF(q).
pub fn mc_dependency(q: u64, l: usize, f: usize, trials: u64, seed: u64) -> FailureEstimate {
    let field = crate::field::FieldSpec::gf(q).expect("valid field size");
    let mut est = FailureEstimate { trials, failures: 0, miscorrections: 0, seed };
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let rows: Vec<Vec<_>> = (0..f).map(|_| nonzero_vector(&field, l, &mut rng)).collect();
        if linalg::rank(&field, &Matrix::from_rows(rows)) < f {
            est.failures += 1;
        }
    }
    est
}

/// Uniform rank-f n×l matrix over GF(q^m): the folded product X·Z of a
/// uniform full-column-rank n×f and a uniform full-row-rank f×(l·m) matrix
/// over GF(q). Every rank-f matrix has exactly |GL_f(q)| such factorizations,
/// so the product is uniform.
pub fn sample_rank_f(
    tower: &TowerSpec,
    n: usize,
    l: usize,
    f: usize,
    rng: &mut SplitMix64,
) -> Matrix {
    let base = tower.base();
    let ext = tower.ext();
    let m = tower.m() as usize;
    assert!(f <= n.min(l * m), "rank out of range");
    if f == 0 {
        return Matrix::zero(ext, n, l);
    }
    let q = base.size() as u64;
    let full_rank = |rows: usize, cols: usize, rng: &mut SplitMix64| loop {
        let mat = Matrix::from_fn(rows, cols, |_, _| {
            base.element(rng.next_below(q) as u32).unwrap()
        });
        if linalg::rank(base, &mat) == rows.min(cols) {
            return mat;
        }
    };
    let x = full_rank(n, f, rng);
    let z = full_rank(f, l * m, rng);
    let prod = linalg::mat_mul(base, &x, &z);
    let out = Matrix::from_fn(n, l, |j, t| {
        let coords: Vec<_> = (0..m).map(|i| prod.get(j, t * m + i)).collect();
        tower.fold(&coords)
    });
    debug_assert_eq!(linalg::rank_q(tower, &out), f);
    out
}

/// Monte Carlo companion for the rank-metric decoder, with a per-trial
/// cross-check that the dependency stage identifies the true rank exactly
/// when and only when the inverse-twisted syndrome head has full
/// extension-field rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GabFailureReport {
    pub estimate: FailureEstimate,
    pub psi_mismatches: u64,
}

pub fn mc_gab_failure(
    code: &GabidulinCode,
    l: usize,
    f: usize,
    trials: u64,
    seed: u64,
) -> GabFailureReport {
    let tower = code.tower();
    let mut est = FailureEstimate { trials, failures: 0, miscorrections: 0, seed };
    let mut psi_mismatches = 0;
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let e = sample_rank_f(tower, code.n(), l, f, &mut rng);
        let out = gab_decode(code, &e, false).expect("shape is valid by construction");
        let exact = out
            .codeword
            .as_ref()
            .map(|c| c.is_zero())
            .unwrap_or(false);
        classify(out.status, exact, &mut est);
        let s = code.syndromes(&e).expect("shape is valid");
        let head: Vec<Vec<_>> = (0..f).map(|i| s.row_vec(i)).collect();
        let dep_identified = out.f_star == f;
        if (psi_rank(tower, &head) == f) != dep_identified {
            psi_mismatches += 1;
        }
    }
    GabFailureReport { estimate: est, psi_mismatches }
}

/// Idealized concatenated channel: each of the N rows is independently hit
/// with probability p and then carries a uniform nonzero error vector.
pub fn concat_channel_sim(
    code: &IRSCode,
    p: &BigRational,
    trials: u64,
    seed: u64,
) -> FailureEstimate {
    assert!(p >= &BigRational::zero() && p <= &BigRational::one());
    let inner = code.inner();
    let field = inner.field();
    // exact threshold: row is bad iff next_u64 < floor(p·2^64)
    let threshold: u128 = {
        let scaled = p * BigRational::from_integer(BigInt::one() << 64);
        (scaled.numer() / scaled.denom()).to_u128().unwrap()
    };
    let mut est = FailureEstimate { trials, failures: 0, miscorrections: 0, seed };
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let mut e = Matrix::zero(field, inner.n(), code.l());
        let mut any = false;
        for row in 0..inner.n() {
            if (rng.next_u64() as u128) < threshold {
                any = true;
                for (t, x) in nonzero_vector(field, code.l(), &mut rng).into_iter().enumerate() {
                    e.set(row, t, x);
                }
            }
        }
        if !any {
            continue; // error-free frames always decode
        }
        let out = collab::decode(code, &e, false).expect("shape is valid by construction");
        let exact = out
            .codeword
            .as_ref()
            .map(|c| c.is_zero())
            .unwrap_or(false);
        classify(out.status, exact, &mut est);
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::rs::GRSCode;
    use std::sync::Arc;

    #[test]
    fn irs_bound_examples() {
        assert_eq!(p_fail_bound_irs(2, 16, 256, 17), pow_rat(256, -15));
        assert!(p_fail_bound_irs(1, 16, 256, 17).is_zero());
        assert!(p_fail_bound_irs(16, 16, 256, 17).is_one());
    }

    #[test]
    fn p_dep_examples() {
        assert_eq!(p_dep_exact(2, 2, 2), rat(1, 3));
        assert!(p_dep_exact(1, 4, 16).is_zero());
        assert!(p_dep_exact(5, 4, 7).is_one());
    }

    #[test]
    fn p_dep_matches_exhaustive_count_gf2_l2_f2() {
        // all ordered pairs of nonzero binary 2-vectors: 3 of 9 dependent
        let f = FieldSpec::gf(2).unwrap();
        let nonzero = [(0u32, 1u32), (1, 0), (1, 1)];
        let mut dep = 0;
        for a in nonzero {
            for b in nonzero {
                let m = Matrix::from_rows(vec![
                    vec![f.element(a.0).unwrap(), f.element(a.1).unwrap()],
                    vec![f.element(b.0).unwrap(), f.element(b.1).unwrap()],
                ]);
                if linalg::rank(&f, &m) < 2 {
                    dep += 1;
                }
            }
        }
        assert_eq!(rat(dep, 9), p_dep_exact(2, 2, 2));
    }

    #[test]
    fn gab_bound_examples() {
        assert_eq!(p_fail_bound_gab(2, 4, 2, 4, 5), rat(1, 1024));
        assert!(p_fail_bound_gab(1, 4, 2, 4, 5).is_zero());
        assert!(p_fail_bound_gab(4, 4, 2, 4, 5).is_one());
    }

    #[test]
    fn sharpened_bound_dominates_exact_everywhere() {
        // the bound with its lower-order factor (1-q^-f)/(1-q^-1) restored
        // really does dominate the exact dependence probability
        for q in [2u64, 16] {
            for l in 2..=6usize {
                for f in 2..=l {
                    let exact = p_dep_exact(f, l, q);
                    let factor = (BigRational::one() - pow_rat(q, -(f as i64)))
                        / (BigRational::one() - pow_rat(q, -1));
                    let bound = pow_rat(q, -((l + 1 - f) as i64)) * factor;
                    assert!(exact <= bound, "q={q} l={l} f={f}");
                }
            }
        }
    }

    #[test]
    fn simplified_bound_is_violated_from_f3() {
        // the simplified q^-(l+1-f) form drops that factor and is genuinely
        // below the exact probability once f >= 3
        assert!(p_dep_exact(2, 4, 16) <= pow_rat(16, -3));
        assert!(p_dep_exact(3, 4, 16) > pow_rat(16, -2));
        assert!(p_dep_exact(4, 4, 16) > pow_rat(16, -1));
    }

    #[test]
    fn fer_bound_edge_cases() {
        let zero = BigRational::zero();
        let one = BigRational::one();
        assert!(fer_bound(&zero, 204, 16, 256, 17).unwrap().is_zero());
        assert!(fer_bound(&one, 204, 16, 256, 17).unwrap().is_one());
        assert!(fer_bound(&rat(2, 1), 204, 16, 256, 17).is_none());
    }

    #[test]
    fn fer_bound_monotone_in_p_and_l() {
        let ps: Vec<BigRational> = [rat(1, 100), rat(2, 100), rat(5, 100), rat(10, 100)].to_vec();
        for l in [9usize, 12, 15] {
            let vals: Vec<BigRational> = ps
                .iter()
                .map(|p| fer_bound(p, 204, l, 256, 17).unwrap())
                .collect();
            for w in vals.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
        for p in &ps {
            let v9 = fer_bound(p, 204, 9, 256, 17).unwrap();
            let v15 = fer_bound(p, 204, 15, 256, 17).unwrap();
            assert!(v15 <= v9);
        }
    }

    #[test]
    fn decimal_and_parse_round_trip() {
        assert_eq!(parse_decimal("0.02").unwrap(), rat(1, 50));
        assert_eq!(parse_decimal("1").unwrap(), BigRational::one());
        assert_eq!(parse_decimal(".5").unwrap(), rat(1, 2));
        assert!(parse_decimal("abc").is_none());
        assert_eq!(decimal_string(&rat(1, 3), 5), "3.3333e-1");
        assert_eq!(decimal_string(&rat(12345, 1), 3), "1.23e4");
        assert_eq!(decimal_string(&BigRational::zero(), 5), "0");
        assert_eq!(decimal_string(&rat(-1, 8), 3), "-1.25e-1");
        // carry across a power of ten: 0.999997 -> 1.0e0 at 2 digits
        assert_eq!(decimal_string(&rat(999_997, 1_000_000), 2), "1.0e0");
    }

    #[test]
    fn wilson_sanity() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!(lo > 0.39 && hi < 0.61);
        let (lo, hi) = wilson_interval(0, 100, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
    }

    fn irs_16_10(l: usize) -> IRSCode {
        let f = Arc::new(FieldSpec::gf(16).unwrap());
        IRSCode::new(GRSCode::make_rs_star(f, 10).unwrap(), l).unwrap()
    }

    #[test]
    fn mc_irs_f1_never_fails() {
        let code = irs_16_10(4);
        let est = mc_irs_failure(&code, 1, 300, 1);
        assert_eq!(est.bad(), 0);
    }

    #[test]
    fn mc_irs_is_deterministic() {
        let code = irs_16_10(4);
        let a = mc_irs_failure(&code, 3, 200, 9);
        let b = mc_irs_failure(&code, 3, 200, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn mc_dependency_matches_exact_reference() {
        // q=2, l=2, f=2: exact probability 1/3
        let est = mc_dependency(2, 2, 2, 20_000, 0);
        let (lo, hi) = est.wilson(3.0);
        let truth = 1.0 / 3.0;
        assert!(lo <= truth && truth <= hi, "[{lo}, {hi}]");
    }

    #[test]
    fn sample_rank_f_properties() {
        let t = TowerSpec::new(2, 4).unwrap();
        let mut rng = SplitMix64::new(77);
        let z = sample_rank_f(&t, 4, 3, 0, &mut rng);
        assert!(z.is_zero());
        for f in 1..=3 {
            for _ in 0..25 {
                let e = sample_rank_f(&t, 4, 3, f, &mut rng);
                assert_eq!(linalg::rank_q(&t, &e), f);
            }
        }
    }

    #[test]
    fn sample_rank_one_is_uniform_over_the_nine_matrices() {
        // q=2, n=2, l=1, m=2: nine rank-1 matrices; chi-square at 99%
        let t = TowerSpec::new(2, 2).unwrap();
        let mut rng = SplitMix64::new(0);
        let trials = 20_000usize;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..trials {
            let e = sample_rank_f(&t, 2, 1, 1, &mut rng);
            let key = (e.get(0, 0).value(), e.get(1, 0).value());
            *counts.entry(key).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 9);
        let expected = trials as f64 / 9.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // chi-square 99% quantile with 8 degrees of freedom
        assert!(chi2 < 20.09, "chi2 = {chi2}");
    }

    #[test]
    fn gab_mc_psi_agreement_and_bound() {
        // q=2, m=n=5, k=2 (d=4), l=3, f=2
        let t = Arc::new(TowerSpec::new(2, 5).unwrap());
        let ext = t.ext().clone();
        let g = [1u32, 2, 4, 8, 16].iter().map(|&v| ext.element(v).unwrap()).collect();
        let code = GabidulinCode::new(t, 5, 2, g).unwrap();
        let rep = mc_gab_failure(&code, 3, 2, 2000, 0);
        assert_eq!(rep.psi_mismatches, 0);
        let bound = p_fail_bound_gab(2, 3, 2, 5, 4).to_f64().unwrap();
        let (lo, _) = rep.estimate.wilson(3.0);
        assert!(lo <= bound, "estimate {} vs bound {bound}", rep.estimate.estimate_f64());
    }

    #[test]
    fn concat_sim_edges_and_determinism() {
        let f = Arc::new(FieldSpec::gf(16).unwrap());
        let code = IRSCode::new(GRSCode::make_rs_star(f, 10).unwrap(), 4).unwrap();
        let zero = BigRational::zero();
        let est = concat_channel_sim(&code, &zero, 100, 3);
        assert_eq!(est.bad(), 0);
        let p = rat(1, 10);
        let a = concat_channel_sim(&code, &p, 300, 5);
        let b = concat_channel_sim(&code, &p, 300, 5);
        assert_eq!(a, b);
    }
}
