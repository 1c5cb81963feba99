//! Generalized Reed-Solomon codes: RS*, shortened RS*, and interleaving.
//!
//! RS*(q,k) is the extended code of length n = q whose evaluation vector is
//! (0, alpha^0, alpha^1, ..., alpha^{q-2}). Its parity check matrix is the
//! Vandermonde matrix with rows v_j^{i-1}, which is what the collaborative
//! decoder leans on: syndrome rows are polynomial evaluations.

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::linalg::Matrix;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("dimension k={k} out of range for length n={n}")]
    BadDimension { n: usize, k: usize },
    #[error("evaluation points must be distinct elements of the field")]
    BadEvaluationPoints,
    #[error("shortening by {s} not possible for dimension {k}")]
    BadShorten { s: usize, k: usize },
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("interleaving degree must be at least 1")]
    BadInterleaving,
    #[error("parity check matrix only defined for RS* flavors")]
    UnsupportedFlavor,
    #[error("element does not belong to the code's field")]
    ForeignElement,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Generic,
    Rs,
    RsStar,
    ShortenedRsStar,
}

impl Flavor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flavor::Generic => "generic",
            Flavor::Rs => "rs",
            Flavor::RsStar => "rs_star",
            Flavor::ShortenedRsStar => "shortened_rs_star",
        }
    }
}

/// GRS(q; n, k, v) evaluation code descriptor.
#[derive(Debug, Clone)]
pub struct GRSCode {
    field: Arc<FieldSpec>,
    n: usize,
    k: usize,
    v: Vec<FieldElement>,
    flavor: Flavor,
    /// Evaluation points removed by shortening, in removal order.
    removed: Vec<FieldElement>,
}

impl GRSCode {
    pub fn new_generic(
        field: Arc<FieldSpec>,
        v: Vec<FieldElement>,
        k: usize,
    ) -> Result<GRSCode, CodeError> {
        let n = v.len();
        if k == 0 || k >= n {
            return Err(CodeError::BadDimension { n, k });
        }
        if v.iter().any(|x| !field.owns(*x)) {
            return Err(CodeError::ForeignElement);
        }
        let mut seen = std::collections::HashSet::new();
        if n > field.size() as usize || !v.iter().all(|x| seen.insert(x.value())) {
            return Err(CodeError::BadEvaluationPoints);
        }
        Ok(GRSCode {
            field,
            n,
            k,
            v,
            flavor: Flavor::Generic,
            removed: Vec::new(),
        })
    }

    /// RS*(q,k): length q, evaluation vector (0, alpha^0, ..., alpha^{q-2}).
    pub fn make_rs_star(field: Arc<FieldSpec>, k: usize) -> Result<GRSCode, CodeError> {
        let q = field.size() as usize;
        if k == 0 || k >= q {
            return Err(CodeError::BadDimension { n: q, k });
        }
        let mut v = Vec::with_capacity(q);
        v.push(field.zero());
        let mut cur = field.one();
        for _ in 0..q - 1 {
            v.push(cur);
            cur = field.mul(cur, field.alpha());
        }
        Ok(GRSCode {
            field,
            n: q,
            k,
            v,
            flavor: Flavor::RsStar,
            removed: Vec::new(),
        })
    }

    /// Removes the last s evaluation points; d = n - k + 1 is unchanged.
    pub fn shorten(&self, s: usize) -> Result<GRSCode, CodeError> {
        if s >= self.k {
            return Err(CodeError::BadShorten { s, k: self.k });
        }
        if s == 0 {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        out.removed.extend(out.v.split_off(out.n - s));
        out.n -= s;
        out.k -= s;
        if matches!(self.flavor, Flavor::RsStar | Flavor::ShortenedRsStar) {
            out.flavor = Flavor::ShortenedRsStar;
        }
        Ok(out)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<FieldSpec> {
        Arc::clone(&self.field)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum distance; GRS codes are MDS.
    pub fn d(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn v(&self) -> &[FieldElement] {
        &self.v
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Evaluates the message polynomial (coefficients low-order first) at
    /// every evaluation point. For shortened codes the message is first
    /// completed with the unique top coefficients that make the removed
    /// points evaluate to zero, so the result stays in the shortened code.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if message.len() != self.k {
            return Err(CodeError::LengthMismatch {
                expected: self.k,
                got: message.len(),
            });
        }
        if message.iter().any(|x| !self.field.owns(*x)) {
            return Err(CodeError::ForeignElement);
        }
        let poly = self.complete_message(message)?;
        Ok(self.v.iter().map(|&x| self.eval_poly(&poly, x)).collect())
    }

    fn eval_poly(&self, poly: &[FieldElement], x: FieldElement) -> FieldElement {
        let f = &*self.field;
        let mut acc = f.zero();
        for &c in poly.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    fn complete_message(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        let s = self.removed.len();
        if s == 0 {
            return Ok(message.to_vec());
        }
        let f = &*self.field;
        let k_full = self.k + s;
        // Solve for the top s coefficients so that every removed point is a
        // root of the completed polynomial. The system matrix is
        // diag(r^k) * Vandermonde(removed), invertible since the removed
        // points are distinct and nonzero.
        let a = Matrix::from_fn(s, s, |i, j| {
            f.pow(self.removed[i], (self.k + j) as u64)
        });
        let b = Matrix::from_fn(s, 1, |i, _| {
            let low: FieldElement = message
                .iter()
                .enumerate()
                .fold(f.zero(), |acc, (j, &c)| {
                    f.add(acc, f.mul(c, f.pow(self.removed[i], j as u64)))
                });
            f.neg(low)
        });
        let top = crate::linalg::solve(f, &a, &b).ok_or(CodeError::BadEvaluationPoints)?;
        let mut poly = message.to_vec();
        for i in 0..s {
            poly.push(top.get(i, 0));
        }
        debug_assert_eq!(poly.len(), k_full);
        Ok(poly)
    }

    /// Lemma-1 Vandermonde parity check matrix: entry (i, j) = v_j^i for
    /// i = 0..n-k-1 (the zero locator contributes the column (1,0,...,0)).
    pub fn parity_check_matrix(&self) -> Result<Matrix, CodeError> {
        if !matches!(self.flavor, Flavor::RsStar | Flavor::ShortenedRsStar) {
            return Err(CodeError::UnsupportedFlavor);
        }
        let f = &*self.field;
        let m = self.n - self.k;
        Ok(Matrix::from_fn(m, self.n, |i, j| f.pow(self.v[j], i as u64)))
    }

    pub fn is_codeword(&self, word: &[FieldElement]) -> Result<bool, CodeError> {
        if word.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: word.len(),
            });
        }
        let f = &*self.field;
        let h = self.parity_check_matrix()?;
        for i in 0..h.rows() {
            let mut acc = f.zero();
            for j in 0..self.n {
                acc = f.add(acc, f.mul(h.get(i, j), word[j]));
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Interleaved Reed-Solomon code: n x l matrices whose columns are
/// codewords of the inner GRS code.
#[derive(Debug, Clone)]
pub struct IRSCode {
    inner: GRSCode,
    l: usize,
}

impl IRSCode {
    pub fn new(inner: GRSCode, l: usize) -> Result<IRSCode, CodeError> {
        if l < 1 {
            return Err(CodeError::BadInterleaving);
        }
        Ok(IRSCode { inner, l })
    }

    pub fn inner(&self) -> &GRSCode {
        &self.inner
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn field(&self) -> &FieldSpec {
        self.inner.field()
    }

    /// Encodes a k x l message matrix column by column.
    pub fn encode(&self, messages: &Matrix) -> Result<Matrix, CodeError> {
        if messages.rows() != self.inner.k() || messages.cols() != self.l {
            return Err(CodeError::LengthMismatch {
                expected: self.inner.k() * self.l,
                got: messages.rows() * messages.cols(),
            });
        }
        let mut out = Matrix::zero(self.field(), self.inner.n(), self.l);
        for t in 0..self.l {
            let msg: Vec<FieldElement> = (0..self.inner.k()).map(|i| messages.get(i, t)).collect();
            let cw = self.inner.encode(&msg)?;
            for (j, &sym) in cw.iter().enumerate() {
                out.set(j, t, sym);
            }
        }
        Ok(out)
    }

    pub fn is_codeword_matrix(&self, y: &Matrix) -> Result<bool, CodeError> {
        if y.rows() != self.inner.n() || y.cols() != self.l {
            return Err(CodeError::LengthMismatch {
                expected: self.inner.n() * self.l,
                got: y.rows() * y.cols(),
            });
        }
        for t in 0..self.l {
            let col: Vec<FieldElement> = (0..self.inner.n()).map(|j| y.get(j, t)).collect();
            if !self.inner.is_codeword(&col)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
