//! Collaborative decoding of interleaved RS codes.
//!
//! All l received columns share the same error positions, so the syndrome
//! matrix has low row rank: its first dependent row exposes the error
//! locator coefficients directly. The decoder streams syndrome rows into an
//! incremental column Gauss-Jordan elimination and stops at the first
//! dependency, so only f*+1 of the n-k rows are ever computed.
//!
//! Positions are 0-based throughout (the zero evaluation point sits at
//! position 0).

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{self, Matrix};
use crate::rs::{CodeError, GRSCode, IRSCode};

/// Instrumentation counters. Multiplications and additions are counted only
/// when both operands (resp. the accumulated term) are nonzero, since a
/// real implementation skips those.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub syndrome_mul: u64,
    pub syndrome_add: u64,
    pub elim_mul: u64,
    pub elim_add: u64,
    pub syndrome_rows: u64,
}

impl Counters {
    pub fn mul(&self) -> u64 {
        self.syndrome_mul + self.elim_mul
    }

    pub fn add(&self) -> u64 {
        self.syndrome_add + self.elim_add
    }
}

/// Lazily computes syndrome rows S_i = (H row i) · Y in order, keeping the
/// running weights v_j^{i-1} so each new row costs one multiplication per
/// matrix entry. Row 1 is a plain column sum: no multiplications at all.
pub struct SyndromeStream<'a> {
    code: &'a GRSCode,
    y: &'a Matrix,
    weights: Vec<FieldElement>,
    rows: Vec<Vec<FieldElement>>,
    counters: Counters,
}

impl<'a> SyndromeStream<'a> {
    pub fn new(code: &'a GRSCode, y: &'a Matrix) -> SyndromeStream<'a> {
        let f = code.field();
        SyndromeStream {
            code,
            y,
            weights: vec![f.one(); code.n()],
            rows: Vec::new(),
            counters: Counters::default(),
        }
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn rows_computed(&self) -> usize {
        self.rows.len()
    }

    pub fn computed_row(&self, i: usize) -> &[FieldElement] {
        &self.rows[i]
    }

    /// Computes and returns the next syndrome row (1-based index
    /// rows_computed()+1). Panics past row n-k.
    pub fn next_row(&mut self) -> Vec<FieldElement> {
        let f = self.code.field();
        let i = self.rows.len() + 1;
        assert!(i <= self.code.n() - self.code.k(), "syndrome row out of range");
        if i > 1 {
            for (w, &v) in self.weights.iter_mut().zip(self.code.v()) {
                if !w.is_zero() && !v.is_zero() {
                    *w = f.mul(*w, v);
                    self.counters.syndrome_mul += 1;
                } else {
                    *w = f.zero();
                }
            }
        }
        let l = self.y.cols();
        let mut row = Vec::with_capacity(l);
        for t in 0..l {
            let mut acc = f.zero();
            for j in 0..self.code.n() {
                let w = self.weights[j];
                let y = self.y.get(j, t);
                if w.is_zero() || y.is_zero() {
                    continue;
                }
                let term = if i == 1 {
                    y
                } else {
                    self.counters.syndrome_mul += 1;
                    f.mul(w, y)
                };
                if acc.is_zero() {
                    acc = term;
                } else {
                    self.counters.syndrome_add += 1;
                    acc = f.add(acc, term);
                }
            }
            row.push(acc);
        }
        self.counters.syndrome_rows += 1;
        self.rows.push(row.clone());
        row
    }
}

/// One syndrome row computed directly (no streaming state).
pub fn syndrome_row(code: &GRSCode, y: &Matrix, i: usize) -> Result<Vec<FieldElement>, CodeError> {
    if i < 1 || i > code.n() - code.k() {
        return Err(CodeError::BadDimension { n: code.n() - code.k(), k: i });
    }
    if y.rows() != code.n() {
        return Err(CodeError::LengthMismatch { expected: code.n(), got: y.rows() });
    }
    let f = code.field();
    let row = (0..y.cols())
        .map(|t| {
            (0..code.n()).fold(f.zero(), |acc, j| {
                let w = f.pow(code.v()[j], (i - 1) as u64);
                f.add(acc, f.mul(w, y.get(j, t)))
            })
        })
        .collect();
    Ok(row)
}

/// Result of absorbing one row into the elimination state.
pub enum Absorb {
    Independent,
    /// The absorbed row equals sum_j coeffs[j] * (original row j+1).
    Dependent { coeffs: Vec<FieldElement> },
}

/// Incremental column Gauss-Jordan over streamed rows. Each stored pivot row
/// is normalized; a coefficient tracker expresses every reduced row as a
/// combination of the original rows so the dependency coefficients fall out
/// without a second solve.
pub struct Elimination<'f> {
    field: &'f FieldSpec,
    width: usize,
    /// (pivot column, normalized reduced row, tracker over original rows)
    pivots: Vec<(usize, Vec<FieldElement>, Vec<FieldElement>)>,
    absorbed: usize,
    pub mul_count: u64,
    pub add_count: u64,
}

impl<'f> Elimination<'f> {
    pub fn new(field: &'f FieldSpec, width: usize) -> Elimination<'f> {
        Elimination {
            field,
            width,
            pivots: Vec::new(),
            absorbed: 0,
            mul_count: 0,
            add_count: 0,
        }
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    pub fn absorbed(&self) -> usize {
        self.absorbed
    }

    pub fn absorb(&mut self, row: &[FieldElement]) -> Absorb {
        assert_eq!(row.len(), self.width);
        let f = self.field;
        let t = self.absorbed + 1;
        let mut cur = row.to_vec();
        let mut trk = vec![f.zero(); t];
        trk[t - 1] = f.one();
        for (pcol, prow, ptrk) in &self.pivots {
            let factor = cur[*pcol];
            if factor.is_zero() {
                continue;
            }
            for j in 0..self.width {
                if prow[j].is_zero() {
                    continue;
                }
                self.mul_count += 1;
                let term = f.mul(factor, prow[j]);
                if !cur[j].is_zero() {
                    self.add_count += 1;
                }
                cur[j] = f.sub(cur[j], term);
            }
            for (j, &c) in ptrk.iter().enumerate() {
                if !c.is_zero() {
                    trk[j] = f.sub(trk[j], f.mul(factor, c));
                }
            }
        }
        self.absorbed = t;
        if cur.iter().all(|x| x.is_zero()) {
            let coeffs = trk[..t - 1].iter().map(|&c| f.neg(c)).collect();
            return Absorb::Dependent { coeffs };
        }
        let pcol = cur.iter().position(|x| !x.is_zero()).unwrap();
        let inv = f.inv(cur[pcol]).unwrap();
        for x in cur.iter_mut() {
            if !x.is_zero() {
                self.mul_count += 1;
                *x = f.mul(*x, inv);
            }
        }
        for x in trk.iter_mut() {
            if !x.is_zero() {
                *x = f.mul(*x, inv);
            }
        }
        self.pivots.push((pcol, cur, trk));
        Absorb::Independent
    }
}

/// Pulls rows until one is a linear combination of its predecessors.
/// Returns (f_star, lambda) with S_{f_star+1} = sum_j lambda[j] S_{j+1},
/// or None if no dependency appears within `limit` rows.
pub fn find_dependency<I>(
    field: &FieldSpec,
    rows: I,
    limit: usize,
) -> Option<(usize, Vec<FieldElement>)>
where
    I: IntoIterator<Item = Vec<FieldElement>>,
{
    let mut elim: Option<Elimination> = None;
    for (t, row) in rows.into_iter().enumerate().take(limit) {
        let e = elim.get_or_insert_with(|| Elimination::new(field, row.len()));
        if let Absorb::Dependent { coeffs } = e.absorb(&row) {
            return Some((t, coeffs));
        }
    }
    None
}

/// Error locator: Lambda(x) = x^f - sum_{j=1..f} lambda[j-1] x^{j-1}.
#[derive(Debug, Clone)]
pub struct ErrorLocator {
    pub f: usize,
    pub lambda: Vec<FieldElement>,
}

impl ErrorLocator {
    pub fn eval(&self, field: &FieldSpec, x: FieldElement) -> FieldElement {
        let mut acc = field.pow(x, self.f as u64);
        for (j, &l) in self.lambda.iter().enumerate() {
            acc = field.sub(acc, field.mul(l, field.pow(x, j as u64)));
        }
        acc
    }
}

/// Evaluates the locator at every evaluation point; a root count different
/// from f means the locator is inconsistent and decoding must fail.
pub fn locate_errors(code: &GRSCode, locator: &ErrorLocator) -> Option<Vec<usize>> {
    let f = code.field();
    let roots: Vec<usize> = code
        .v()
        .iter()
        .enumerate()
        .filter(|(_, &x)| locator.eval(f, x).is_zero())
        .map(|(j, _)| j)
        .collect();
    if roots.len() == locator.f {
        Some(roots)
    } else {
        None
    }
}

/// Solves the f x f Vandermonde system (nodes v_i, i in F) against the
/// first f syndrome rows for the error values at the located positions.
pub fn reconstruct_errors(code: &GRSCode, s_head: &Matrix, positions: &[usize]) -> Matrix {
    let f = code.field();
    let fc = positions.len();
    assert_eq!(s_head.rows(), fc);
    let a = Matrix::from_fn(fc, fc, |r, u| f.pow(code.v()[positions[u]], r as u64));
    linalg::solve(f, &a, s_head).expect("distinct evaluation nodes guarantee invertibility")
}

/// Collaborative correcting radius min(l, d-2).
pub fn f_max(l: usize, d: usize) -> usize {
    assert!(l >= 1 && d >= 2);
    l.min(d - 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    /// No syndrome-row dependency within the correcting radius.
    NoDependency,
    /// The locator's root count among the evaluation points differs from f*.
    RootCountMismatch,
    /// Post-hoc verification (opt-in) rejected the corrected word.
    VerifyFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Success,
    DetectedFailure(FailureReason),
}

impl DecodeStatus {
    pub fn is_success(&self) -> bool {
        matches!(self, DecodeStatus::Success)
    }
}

#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub codeword: Option<Matrix>,
    pub error_matrix: Option<Matrix>,
    /// Sorted 0-based error positions (success only).
    pub error_positions: Option<Vec<usize>>,
    pub f_star: usize,
    pub counters: Counters,
}

/// Full pipeline: stream syndrome rows, stop at the first dependency, read
/// off the locator, find its roots, solve for the error values, subtract.
/// With `verify` the corrected word's full syndrome is recomputed (costing
/// the rows the lazy path skips) and a nonzero result is a failure.
pub fn decode(code: &IRSCode, y: &Matrix, verify: bool) -> Result<DecodeOutcome, CodeError> {
    let inner = code.inner();
    let field = inner.field();
    if y.rows() != inner.n() || y.cols() != code.l() {
        return Err(CodeError::LengthMismatch {
            expected: inner.n() * code.l(),
            got: y.rows() * y.cols(),
        });
    }
    if y.iter().any(|x| !field.owns(*x)) {
        return Err(CodeError::ForeignElement);
    }

    let limit = f_max(code.l(), inner.d()) + 1;
    let mut stream = SyndromeStream::new(inner, y);
    let mut elim = Elimination::new(field, code.l());
    let mut dependency = None;
    for _ in 0..limit {
        let row = stream.next_row();
        if let Absorb::Dependent { coeffs } = elim.absorb(&row) {
            dependency = Some(coeffs);
            break;
        }
    }
    let mut counters = stream.counters();
    counters.elim_mul = elim.mul_count;
    counters.elim_add = elim.add_count;

    let failure = |reason, f_star, counters| DecodeOutcome {
        status: DecodeStatus::DetectedFailure(reason),
        codeword: None,
        error_matrix: None,
        error_positions: None,
        f_star,
        counters,
    };

    let Some(lambda) = dependency else {
        return Ok(failure(FailureReason::NoDependency, elim.absorbed(), counters));
    };
    let f_star = lambda.len();
    if f_star == 0 {
        if verify && !code.is_codeword_matrix(y)? {
            return Ok(failure(FailureReason::VerifyFailed, 0, counters));
        }
        return Ok(DecodeOutcome {
            status: DecodeStatus::Success,
            codeword: Some(y.clone()),
            error_matrix: Some(Matrix::zero(field, inner.n(), code.l())),
            error_positions: Some(Vec::new()),
            f_star: 0,
            counters,
        });
    }

    let locator = ErrorLocator { f: f_star, lambda };
    let Some(positions) = locate_errors(inner, &locator) else {
        return Ok(failure(FailureReason::RootCountMismatch, f_star, counters));
    };

    let s_head = Matrix::from_fn(f_star, code.l(), |i, t| stream.computed_row(i)[t]);
    let e_f = reconstruct_errors(inner, &s_head, &positions);
    let mut error = Matrix::zero(field, inner.n(), code.l());
    for (u, &pos) in positions.iter().enumerate() {
        for t in 0..code.l() {
            error.set(pos, t, e_f.get(u, t));
        }
    }
    let codeword = linalg::mat_sub(field, y, &error);

    if verify && !code.is_codeword_matrix(&codeword)? {
        return Ok(failure(FailureReason::VerifyFailed, f_star, counters));
    }

    Ok(DecodeOutcome {
        status: DecodeStatus::Success,
        codeword: Some(codeword),
        error_matrix: Some(error),
        error_positions: Some(positions),
        f_star,
        counters,
    })
}
