//! Interleaved Gabidulin codes and their collaborative rank-error decoder.
//!
//! The decoder mirrors the interleaved-RS pipeline with the Frobenius map
//! taking the role of evaluation-point powers. Incoming syndrome rows are
//! normalized by an inverse Frobenius twist so the exact same incremental
//! elimination is reused; the dependency coefficients are then twisted back
//! and converted into an error span polynomial whose root space is the
//! GF(q)-support of the error.
//!
//! Error model: a rank-f error is E = C·Z with C over GF(q) (n×f, the
//! column support) and Z over GF(q^m) (f×l). Syndrome row i twists the
//! received symbols: s_i^(t) = sum_j h_j · Y_{jt}^{[i-1]}, which is
//! GF(q)-linear in Y and vanishes on codewords.

use crate::collab::{Absorb, Counters, DecodeStatus, Elimination, FailureReason, f_max};
use crate::field::{FieldElement, TowerSpec};
use crate::linalg::{self, Matrix};
use crate::rs::CodeError;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GabError {
    #[error("code length n={n} must satisfy k < n <= m={m}")]
    BadShape { n: usize, m: usize },
    #[error("generator vector is not linearly independent over the base field")]
    DependentGenerator,
    #[error("no valid parity vector exists for this generator")]
    NoParityVector,
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Gabidulin code of length n <= m over GF(q^m), minimum rank distance
/// d = n - k + 1.
#[derive(Debug, Clone)]
pub struct GabidulinCode {
    tower: Arc<TowerSpec>,
    n: usize,
    k: usize,
    g: Vec<FieldElement>,
    h: Vec<FieldElement>,
}

impl GabidulinCode {
    pub fn new(
        tower: Arc<TowerSpec>,
        n: usize,
        k: usize,
        g: Vec<FieldElement>,
    ) -> Result<GabidulinCode, GabError> {
        let m = tower.m() as usize;
        if n > m || k == 0 || k >= n || g.len() != n {
            return Err(GabError::BadShape { n, m });
        }
        let g_mat = Matrix::from_fn(n, 1, |j, _| g[j]);
        if linalg::rank_q(&tower, &g_mat) != n {
            return Err(GabError::DependentGenerator);
        }
        // h spans the nullspace of the (n-1) x n Moore system
        // sum_j g_j^{[c]} h_j = 0 for c = 0..n-2; these are exactly the
        // orthogonality conditions that make every twisted syndrome row
        // vanish on codewords.
        let ext = tower.ext();
        let a = Matrix::from_fn(n - 1, n, |c, j| tower.frobenius(g[j], c as i64));
        let ns = linalg::nullspace(ext, &a);
        let h = ns.into_iter().next().ok_or(GabError::NoParityVector)?;
        // the support-recovery step needs h itself independent over GF(q)
        let h_mat = Matrix::from_fn(n, 1, |j, _| h[j]);
        if linalg::rank_q(&tower, &h_mat) != n {
            return Err(GabError::NoParityVector);
        }
        for c in 0..n - 1 {
            let mut acc = ext.zero();
            for j in 0..n {
                acc = ext.add(acc, ext.mul(h[j], tower.frobenius(g[j], c as i64)));
            }
            assert!(acc.is_zero(), "parity orthogonality violated at twist {c}");
        }
        Ok(GabidulinCode { tower, n, k, g, h })
    }

    pub fn tower(&self) -> &TowerSpec {
        &self.tower
    }

    pub fn tower_arc(&self) -> Arc<TowerSpec> {
        Arc::clone(&self.tower)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn g(&self) -> &[FieldElement] {
        &self.g
    }

    pub fn h(&self) -> &[FieldElement] {
        &self.h
    }

    /// Encodes a k x l message matrix: column t gets
    /// c_j = sum_i U_{i,t} · g_j^{[i]}.
    pub fn encode(&self, u: &Matrix) -> Result<Matrix, GabError> {
        if u.rows() != self.k || u.cols() == 0 {
            return Err(GabError::LengthMismatch {
                expected: self.k,
                got: u.rows(),
            });
        }
        let ext = self.tower.ext();
        let mut out = Matrix::zero(ext, self.n, u.cols());
        for t in 0..u.cols() {
            for j in 0..self.n {
                let mut acc = ext.zero();
                for i in 0..self.k {
                    acc = ext.add(acc, ext.mul(u.get(i, t), self.tower.frobenius(self.g[j], i as i64)));
                }
                out.set(j, t, acc);
            }
        }
        Ok(out)
    }

    /// Syndrome row i (1-based): s_i^(t) = sum_j h_j · Y_{jt}^{[i-1]}.
    pub fn syndrome_row(&self, y: &Matrix, i: usize, counters: &mut Counters) -> Vec<FieldElement> {
        assert!(i >= 1 && i <= self.d() - 1, "syndrome row out of range");
        let ext = self.tower.ext();
        let mut row = Vec::with_capacity(y.cols());
        for t in 0..y.cols() {
            let mut acc = ext.zero();
            for j in 0..self.n {
                let yt = self.tower.frobenius(y.get(j, t), (i - 1) as i64);
                if yt.is_zero() || self.h[j].is_zero() {
                    continue;
                }
                counters.syndrome_mul += 1;
                let term = ext.mul(self.h[j], yt);
                if !acc.is_zero() {
                    counters.syndrome_add += 1;
                }
                acc = ext.add(acc, term);
            }
            row.push(acc);
        }
        counters.syndrome_rows += 1;
        row
    }

    /// The full (d-1) x l syndrome matrix.
    pub fn syndromes(&self, y: &Matrix) -> Result<Matrix, GabError> {
        if y.rows() != self.n {
            return Err(GabError::LengthMismatch { expected: self.n, got: y.rows() });
        }
        let mut c = Counters::default();
        let rows: Vec<Vec<FieldElement>> =
            (1..self.d()).map(|i| self.syndrome_row(y, i, &mut c)).collect();
        Ok(Matrix::from_rows(rows))
    }
}

/// Finds the first syndrome row expressible through its predecessors under
/// the Frobenius-twisted dependency S_{f+1} = sum_j lambda_j (S_{f+1-j})^{[j]}.
///
/// Row j is first normalized to U_j = S_j^{[-j]}; the twisted dependency then
/// becomes an ordinary linear one, U_{f+1} = sum_i mu_i U_i, handled by the
/// plain elimination. Twisting back gives lambda_j = (mu_{f+1-j})^{[f+1]}.
pub fn gab_find_dependency<I>(
    tower: &TowerSpec,
    rows: I,
    limit: usize,
) -> Option<(usize, Vec<FieldElement>)>
where
    I: IntoIterator<Item = Vec<FieldElement>>,
{
    let ext = tower.ext();
    let mut elim: Option<Elimination> = None;
    for (idx, row) in rows.into_iter().enumerate().take(limit) {
        let j = (idx + 1) as i64;
        let u: Vec<FieldElement> = row.iter().map(|&x| tower.frobenius(x, -j)).collect();
        let e = elim.get_or_insert_with(|| Elimination::new(ext, u.len()));
        if let Absorb::Dependent { coeffs: mu } = e.absorb(&u) {
            let f = idx;
            let lambda = (1..=f)
                .map(|j| tower.frobenius(mu[f - j], (f + 1) as i64))
                .collect();
            return Some((f, lambda));
        }
    }
    None
}

/// Linearized polynomial Lambda(x) = x^{[f]} - sum_{j=1..f} lambda_j x^{[j-1]}.
/// Its root set in GF(q^m) is a GF(q)-subspace.
#[derive(Debug, Clone)]
pub struct LinearizedPoly {
    pub f: usize,
    pub lambda: Vec<FieldElement>,
}

impl LinearizedPoly {
    pub fn eval(&self, tower: &TowerSpec, x: FieldElement) -> FieldElement {
        let ext = tower.ext();
        let mut acc = tower.frobenius(x, self.f as i64);
        for (j, &l) in self.lambda.iter().enumerate() {
            acc = ext.sub(acc, ext.mul(l, tower.frobenius(x, j as i64)));
        }
        acc
    }
}

/// Converts the dependency coefficients (zeros of x - sum_j lambda_j x^{[j]})
/// into the monic span-polynomial form with the same root space. Returns
/// None when lambda_f = 0, i.e. the polynomial degenerates and cannot have
/// an f-dimensional root space.
pub fn span_poly_from_dependency(
    tower: &TowerSpec,
    lambda: &[FieldElement],
) -> Option<LinearizedPoly> {
    let ext = tower.ext();
    let f = lambda.len();
    let top = lambda[f - 1];
    if top.is_zero() {
        return None;
    }
    // scale by c = -1/lambda_f so the [f] coefficient becomes 1
    let c = ext.neg(ext.inv(top).unwrap());
    let mut out = Vec::with_capacity(f);
    out.push(ext.neg(c));
    for j in 0..f - 1 {
        out.push(ext.mul(c, lambda[j]));
    }
    Some(LinearizedPoly { f, lambda: out })
}

/// Basis of the polynomial's root space, obtained as the kernel of the
/// m x m base-field matrix of the GF(q)-linear map x -> Lambda(x).
/// Returns None when the kernel dimension differs from f.
pub fn error_span_roots(tower: &TowerSpec, poly: &LinearizedPoly) -> Option<Vec<FieldElement>> {
    let base = tower.base();
    let m = tower.m() as usize;
    let mut mat = Matrix::zero(base, m, m);
    for i in 0..m {
        let mut coords = vec![base.zero(); m];
        coords[i] = base.one();
        let img = tower.expand(poly.eval(tower, tower.fold(&coords)));
        for (r, &c) in img.iter().enumerate() {
            mat.set(r, i, c);
        }
    }
    let kernel = linalg::nullspace(base, &mat);
    if kernel.len() != poly.f {
        return None;
    }
    Some(kernel.into_iter().map(|v| tower.fold(&v)).collect())
}

/// Recovers the rank-f error from the first f syndrome rows and a basis
/// (a_1..a_f) of the error span. Solving the inverse-twisted Moore system
/// M_{iu} = a_u^{[-(i-1)]} against S_i^{[-(i-1)]} yields Z; the GF(q)
/// support columns come from sum_j h_j C_{ju} = a_u; then E = C·Z.
/// Returns None when any step is inconsistent (detected failure).
pub fn gab_reconstruct(
    code: &GabidulinCode,
    s_head: &Matrix,
    basis: &[FieldElement],
) -> Option<Matrix> {
    let tower = code.tower();
    let ext = tower.ext();
    let base = tower.base();
    let f = basis.len();
    assert!(f >= 1 && s_head.rows() == f);
    let l = s_head.cols();

    let moore = Matrix::from_fn(f, f, |i, u| tower.frobenius(basis[u], -(i as i64)));
    let rhs = Matrix::from_fn(f, l, |i, t| tower.frobenius(s_head.get(i, t), -(i as i64)));
    let z = linalg::solve(ext, &moore, &rhs)?;

    // support: one GF(q) column per basis element, via the expanded h system
    let m = tower.m() as usize;
    let h_sys = {
        let mut a = Matrix::zero(base, m, code.n());
        for j in 0..code.n() {
            for (r, &c) in tower.expand(code.h()[j]).iter().enumerate() {
                a.set(r, j, c);
            }
        }
        a
    };
    let mut c_cols = Vec::with_capacity(f);
    for &a_u in basis {
        c_cols.push(linalg::solve_unique(base, &h_sys, &tower.expand(a_u))?);
    }

    let mut e = Matrix::zero(ext, code.n(), l);
    for j in 0..code.n() {
        for t in 0..l {
            let mut acc = ext.zero();
            for u in 0..f {
                let c = c_cols[u][j];
                if c.is_zero() {
                    continue;
                }
                acc = ext.add(acc, ext.mul(tower.lift(c), z.get(u, t)));
            }
            e.set(j, t, acc);
        }
    }

    // residual and rank guards: the candidate must explain the rows it was
    // built from and actually have rank f over GF(q)
    let mut scratch = Counters::default();
    for i in 1..=f {
        if code.syndrome_row(&e, i, &mut scratch) != s_head.row(i - 1) {
            return None;
        }
    }
    if linalg::rank_q(tower, &e) != f {
        return None;
    }
    Some(e)
}

#[derive(Debug, Clone)]
pub struct GabDecodeOutcome {
    pub status: DecodeStatus,
    pub codeword: Option<Matrix>,
    pub error_matrix: Option<Matrix>,
    pub f_star: usize,
    pub counters: Counters,
}

/// Full rank-error pipeline: lazy twisted syndromes -> dependency ->
/// span polynomial -> root space -> reconstruction -> subtract.
/// On success at most f*+1 syndrome rows are computed (the reconstruction
/// residual re-derives its rows from the candidate error, not from Y).
pub fn gab_decode(code: &GabidulinCode, y: &Matrix, verify: bool) -> Result<GabDecodeOutcome, GabError> {
    let tower = code.tower();
    let ext = tower.ext();
    if y.rows() != code.n() || y.cols() == 0 {
        return Err(GabError::LengthMismatch { expected: code.n(), got: y.rows() });
    }
    let l = y.cols();
    let limit = f_max(l, code.d()) + 1;

    let mut counters = Counters::default();
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    let mut elim = Elimination::new(ext, l);
    let mut dependency = None;
    for i in 1..=limit {
        let row = code.syndrome_row(y, i, &mut counters);
        let u: Vec<FieldElement> = row.iter().map(|&x| tower.frobenius(x, -(i as i64))).collect();
        rows.push(row);
        if let Absorb::Dependent { coeffs: mu } = elim.absorb(&u) {
            let f = i - 1;
            let lambda: Vec<FieldElement> = (1..=f)
                .map(|j| tower.frobenius(mu[f - j], (f + 1) as i64))
                .collect();
            dependency = Some((f, lambda));
            break;
        }
    }
    counters.elim_mul = elim.mul_count;
    counters.elim_add = elim.add_count;

    let failure = |reason, f_star, counters| GabDecodeOutcome {
        status: DecodeStatus::DetectedFailure(reason),
        codeword: None,
        error_matrix: None,
        f_star,
        counters,
    };

    let Some((f_star, lambda)) = dependency else {
        return Ok(failure(FailureReason::NoDependency, elim.absorbed(), counters));
    };
    if f_star == 0 {
        if verify && !code.syndromes(y)?.is_zero() {
            return Ok(failure(FailureReason::VerifyFailed, 0, counters));
        }
        return Ok(GabDecodeOutcome {
            status: DecodeStatus::Success,
            codeword: Some(y.clone()),
            error_matrix: Some(Matrix::zero(ext, code.n(), l)),
            f_star: 0,
            counters,
        });
    }

    let Some(span) = span_poly_from_dependency(tower, &lambda) else {
        return Ok(failure(FailureReason::RootCountMismatch, f_star, counters));
    };
    let Some(basis) = error_span_roots(tower, &span) else {
        return Ok(failure(FailureReason::RootCountMismatch, f_star, counters));
    };
    let s_head = Matrix::from_rows(rows[..f_star].to_vec());
    let Some(error) = gab_reconstruct(code, &s_head, &basis) else {
        return Ok(failure(FailureReason::RootCountMismatch, f_star, counters));
    };
    let codeword = linalg::mat_sub(ext, y, &error);

    if verify {
        let s = code.syndromes(&codeword)?;
        if !s.is_zero() {
            return Ok(failure(FailureReason::VerifyFailed, f_star, counters));
        }
    }

    Ok(GabDecodeOutcome {
        status: DecodeStatus::Success,
        codeword: Some(codeword),
        error_matrix: Some(error),
        f_star,
        counters,
    })
}

/// Extension-field rank of the row-wise inverse-twisted syndrome head
/// (S_1, S_2^{[-1]}, ..., S_f^{[-(f-1)]}). The dependency stage identifies
/// the error rank f exactly iff this rank equals f; the uniform extra
/// twist relating these rows to the elimination's normalized rows is an
/// automorphism and so rank-preserving.
pub fn psi_rank(tower: &TowerSpec, rows: &[Vec<FieldElement>]) -> usize {
    let twisted: Vec<Vec<FieldElement>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().map(|&x| tower.frobenius(x, -(i as i64))).collect())
        .collect();
    linalg::rank_ext(tower, &Matrix::from_rows(twisted))
}
