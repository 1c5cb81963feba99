//! Dense matrices over a finite field and the elimination routines shared
//! by the decoders: rank, solving square systems, and nullspace bases.

use crate::field::{FieldElement, FieldSpec, TowerSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn filled(rows: usize, cols: usize, fill: FieldElement) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    pub fn zero(field: &FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix::filled(rows, cols, field.zero())
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<FieldElement> {
        self.row(i).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = &FieldElement> {
        self.data.iter()
    }
}

pub fn mat_mul(field: &FieldSpec, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols(), b.rows());
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = field.zero();
        for t in 0..a.cols() {
            acc = field.add(acc, field.mul(a.get(i, t), b.get(t, j)));
        }
        acc
    })
}

pub fn mat_sub(field: &FieldSpec, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    Matrix::from_fn(a.rows(), a.cols(), |i, j| field.sub(a.get(i, j), b.get(i, j)))
}

pub fn mat_add(field: &FieldSpec, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    Matrix::from_fn(a.rows(), a.cols(), |i, j| field.add(a.get(i, j), b.get(i, j)))
}

/// Row echelon reduction in place; returns the pivot columns.
fn echelon(field: &FieldSpec, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(pr) = (r..m.rows()).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..m.cols() {
                let (a, b) = (m.get(r, j), m.get(pr, j));
                m.set(r, j, b);
                m.set(pr, j, a);
            }
        }
        let inv = field.inv(m.get(r, c)).expect("pivot nonzero");
        for j in 0..m.cols() {
            m.set(r, j, field.mul(m.get(r, j), inv));
        }
        for i in 0..m.rows() {
            if i != r && !m.get(i, c).is_zero() {
                let factor = m.get(i, c);
                for j in 0..m.cols() {
                    let v = field.sub(m.get(i, j), field.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: &FieldSpec, m: &Matrix) -> usize {
    let mut work = m.clone();
    echelon(field, &mut work).len()
}

/// Solves A x = B for square invertible A (B may have several columns).
/// Returns None when A is singular.
pub fn solve(field: &FieldSpec, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), a.cols());
    assert_eq!(a.rows(), b.rows());
    let n = a.rows();
    let mut aug = Matrix::from_fn(n, n + b.cols(), |i, j| {
        if j < n {
            a.get(i, j)
        } else {
            b.get(i, j - n)
        }
    });
    let pivots = echelon(field, &mut aug);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(Matrix::from_fn(n, b.cols(), |i, j| aug.get(i, n + j)))
}

/// Solves a general (possibly rectangular) system A x = b for a single
/// right-hand side; returns None when inconsistent, and the unique solution
/// only when the system determines it (full column rank).
pub fn solve_unique(field: &FieldSpec, a: &Matrix, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let mut aug = Matrix::from_fn(a.rows(), n + 1, |i, j| {
        if j < n {
            a.get(i, j)
        } else {
            b[i]
        }
    });
    let pivots = echelon(field, &mut aug);
    if pivots.contains(&n) {
        return None; // inconsistent
    }
    if pivots.len() < n {
        return None; // underdetermined
    }
    let mut x = vec![field.zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, n);
    }
    Some(x)
}

/// Basis of the right nullspace of A.
pub fn nullspace(field: &FieldSpec, a: &Matrix) -> Vec<Vec<FieldElement>> {
    let mut work = a.clone();
    let pivots = echelon(field, &mut work);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![field.zero(); n];
        v[fc] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(work.get(r, fc));
        }
        basis.push(v);
    }
    basis
}

/// Rank over the extension field GF(q^m) itself.
pub fn rank_ext(tower: &TowerSpec, m: &Matrix) -> usize {
    rank(tower.ext(), m)
}

/// Expands each entry of a matrix over GF(q^m) into its m base-field
/// coordinates (an n x k matrix becomes n x km over GF(q)).
pub fn expand_base(tower: &TowerSpec, m: &Matrix) -> Matrix {
    let mm = tower.m() as usize;
    let mut out = Matrix::zero(tower.base(), m.rows(), m.cols() * mm);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for (t, c) in tower.expand(m.get(i, j)).into_iter().enumerate() {
                out.set(i, j * mm + t, c);
            }
        }
    }
    out
}

/// Rank of the base-field expansion, per the tower's embedding.
pub fn rank_q(tower: &TowerSpec, m: &Matrix) -> usize {
    rank(tower.base(), &expand_base(tower, m))
}
