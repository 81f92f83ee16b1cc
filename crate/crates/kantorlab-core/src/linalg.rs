//! Exact dense linear algebra: reduced row echelon forms, solving, kernels and
//! canonical subspace arithmetic.
//!
//! Everything here is deterministic: pivots are chosen as the first nonzero
//! entry in column-major scan order, with no fraction-minimizing heuristics,
//! so repeated runs produce identical canonical forms.

use crate::field::{Field, Scalar};
use crate::{Error, Result};

/// A dense matrix of exact field elements, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Matrix {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            assert_eq!(r.len(), n_cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n_rows, cols: n_cols, field, data }
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Scalar> {
        self.row(r).to_vec()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mat_mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mat_mul");
        let mut out = Matrix::zero(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mat_vec");
        let mut out = vec![self.field.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                out[i] = out[i].add(&a.mul(&v[j]));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x = x.mul(c);
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(rhs.data.iter()) {
            *x = x.add(y);
        }
        out
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(rhs.data.iter()) {
            *x = x.sub(y);
        }
        out
    }

    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = self.field.zero();
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        t
    }
}

/// Reduced row echelon form. Returns `(rref, rank, pivot columns)`.
pub fn rref(m: &Matrix) -> (Matrix, usize, Vec<usize>) {
    let mut rs = RowSpace::new(m.field, m.cols);
    for r in 0..m.rows {
        rs.insert(m.row_vec(r));
    }
    let pivots = rs.pivots.clone();
    let rank = rs.rank();
    let mut rows = rs.into_sorted_rows();
    // pad with zero rows to preserve the input shape
    while rows.len() < m.rows {
        rows.push(vec![m.field.zero(); m.cols]);
    }
    let mut piv_sorted = pivots;
    piv_sorted.sort_unstable();
    (Matrix::from_rows(m.field, rows), rank, piv_sorted)
}

/// Solves `a * x = b`; free variables are set to zero under the pivot
/// convention. Returns `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if a.rows != b.len() {
        return Err(Error::Shape(format!(
            "solve: matrix has {} rows but rhs has {}",
            a.rows,
            b.len()
        )));
    }
    let solver = LinearSolver::new(a.clone());
    Ok(solver.solve(b))
}

/// Basis of the null space `{x : m x = 0}` as a canonical subspace.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let (r, _rank, pivots) = rref(m);
    kernel_from_rref(&r, &pivots)
}

fn kernel_from_rref(r: &Matrix, pivots: &[usize]) -> Subspace {
    let field = r.field;
    let n = r.cols;
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); n];
        v[free] = field.one();
        for (row, &pc) in pivots.iter().enumerate() {
            // pivot entry is 1, so the pivot variable is minus the free column entry
            v[pc] = r.get(row, free).neg();
        }
        basis.push(v);
    }
    Subspace::from_rows(field, n, basis)
}

/// A subspace of `K^n`, stored as the (unique) reduced row echelon basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub ambient: usize,
    pub field: Field,
    basis: Vec<Vec<Scalar>>, // rref rows, sorted by pivot
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, field, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace::from_rows(field, ambient, (0..ambient).map(|i| unit_vec(field, ambient, i)).collect())
    }

    pub fn from_rows(field: Field, ambient: usize, rows: Vec<Vec<Scalar>>) -> Subspace {
        let mut rs = RowSpace::new(field, ambient);
        for r in rows {
            assert_eq!(r.len(), ambient, "ambient mismatch");
            rs.insert(r);
        }
        rs.into_subspace()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_rows(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.basis.clone())
    }

    pub fn contains_vec(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        let mut w = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(self.pivots.iter()) {
            if !w[pc].is_zero() {
                let c = w[pc].clone();
                for (wi, ri) in w.iter_mut().zip(row.iter()) {
                    if !ri.is_zero() {
                        *wi = wi.sub(&c.mul(ri));
                    }
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.basis.iter().all(|v| self.contains_vec(v)))
    }

    pub fn equal(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.basis == other.basis)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Subspace::from_rows(self.field, self.ambient, rows))
    }

    /// Intersection computed via the kernel of the stacked coefficient system
    /// `A^T x - B^T y = 0`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(self.field, self.ambient));
        }
        let stacked = Matrix::from_fn(self.field, self.ambient, a + b, |i, j| {
            if j < a {
                self.basis[j][i].clone()
            } else {
                other.basis[j - a][i].neg()
            }
        });
        let ker = kernel_basis(&stacked);
        let mut rows = Vec::new();
        for xy in ker.basis_rows() {
            let mut v = vec![self.field.zero(); self.ambient];
            for (t, coeff) in xy[..a].iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for (vi, bi) in v.iter_mut().zip(self.basis[t].iter()) {
                    vi.add_mul_assign(coeff, bi);
                }
            }
            rows.push(v);
        }
        Ok(Subspace::from_rows(self.field, self.ambient, rows))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Shape(format!(
                "ambient mismatch: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

pub fn unit_vec(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Incremental Gauss-Jordan row space. Rows are kept fully reduced against
/// each other; insertion order does not affect the final canonical basis.
#[derive(Debug, Clone)]
pub struct RowSpace {
    pub field: Field,
    pub ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    /// When enabled, `trans[r]` expresses `rows[r]` as a combination of the
    /// inserted generators (by insertion index).
    trans: Option<Vec<Vec<Scalar>>>,
    inserted: usize,
}

impl RowSpace {
    pub fn new(field: Field, ambient: usize) -> RowSpace {
        RowSpace { field, ambient, rows: Vec::new(), pivots: Vec::new(), trans: None, inserted: 0 }
    }

    /// Like `new`, but records how each basis row decomposes over the
    /// generators fed to `insert`.
    pub fn with_transform(field: Field, ambient: usize) -> RowSpace {
        RowSpace { trans: Some(Vec::new()), ..RowSpace::new(field, ambient) }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows. Returns the remainder and, when
    /// transform tracking is on, the generator combination consumed.
    fn reduce_full(&self, mut v: Vec<Scalar>) -> (Vec<Scalar>, Option<Vec<Scalar>>) {
        let mut combo = self
            .trans
            .as_ref()
            .map(|_| vec![self.field.zero(); self.inserted]);
        for (r, &pc) in self.pivots.iter().enumerate() {
            if v[pc].is_zero() {
                continue;
            }
            let c = v[pc].clone();
            for (vi, ri) in v.iter_mut().zip(self.rows[r].iter()) {
                if !ri.is_zero() {
                    *vi = vi.sub(&c.mul(ri));
                }
            }
            if let (Some(combo), Some(trans)) = (combo.as_mut(), self.trans.as_ref()) {
                for (ci, ti) in combo.iter_mut().zip(trans[r].iter()) {
                    ci.add_mul_assign(&c, ti);
                }
            }
        }
        (v, combo)
    }

    /// Inserts a vector; returns `true` when the rank grows. Every call
    /// counts as one generator for transform bookkeeping, whether or not the
    /// rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        let (mut v, combo) = self.reduce_full(v);
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
            self.inserted += 1;
            return false;
        };
        // normalize pivot to 1
        let inv = v[pc].inv();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let mut new_trans_row = None;
        if self.trans.is_some() {
            let mut combo = combo.unwrap();
            combo.push(self.field.zero());
            for c in combo.iter_mut() {
                *c = c.neg().mul(&inv);
            }
            let last = combo.len() - 1;
            combo[last] = inv.clone();
            new_trans_row = Some(combo);
        }
        // eliminate the new pivot from existing rows
        for (r, row) in self.rows.iter_mut().enumerate() {
            if row[pc].is_zero() {
                continue;
            }
            let c = row[pc].clone();
            for (xi, vi) in row.iter_mut().zip(v.iter()) {
                if !vi.is_zero() {
                    *xi = xi.sub(&c.mul(vi));
                }
            }
            if let (Some(trans), Some(new_row)) = (self.trans.as_mut(), new_trans_row.as_ref()) {
                let old = &mut trans[r];
                old.resize(self.inserted + 1, self.field.zero());
                for (oi, ni) in old.iter_mut().zip(new_row.iter()) {
                    *oi = oi.sub(&c.mul(ni));
                }
            }
        }
        self.inserted += 1;
        if let (Some(trans), Some(new_row)) = (self.trans.as_mut(), new_trans_row) {
            for t in trans.iter_mut() {
                t.resize(self.inserted, self.field.zero());
            }
            let mut nr = new_row;
            nr.resize(self.inserted, self.field.zero());
            trans.push(nr);
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    /// Counts inserted generators so transform rows can be interpreted.
    pub fn generators_seen(&self) -> usize {
        self.inserted
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let (rem, _) = self.reduce_full(v.to_vec());
        rem.iter().all(|x| x.is_zero())
    }

    /// Expresses `v` in the current basis rows; `None` when `v` is outside the
    /// span. Coordinates are returned in the *sorted-by-pivot* row order.
    pub fn express(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut w = v.to_vec();
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivots[r]);
        let mut coords = vec![self.field.zero(); self.rows.len()];
        for (slot, &r) in order.iter().enumerate() {
            let pc = self.pivots[r];
            if w[pc].is_zero() {
                continue;
            }
            let c = w[pc].clone();
            for (wi, ri) in w.iter_mut().zip(self.rows[r].iter()) {
                if !ri.is_zero() {
                    *wi = wi.sub(&c.mul(ri));
                }
            }
            coords[slot] = c;
        }
        if w.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    /// Expresses `v` over the original generators (requires transform mode).
    pub fn express_in_generators(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let trans = self.trans.as_ref().expect("transform tracking not enabled");
        let mut w = v.to_vec();
        let mut combo = vec![self.field.zero(); self.inserted];
        for (r, &pc) in self.pivots.iter().enumerate() {
            if w[pc].is_zero() {
                continue;
            }
            let c = w[pc].clone();
            for (wi, ri) in w.iter_mut().zip(self.rows[r].iter()) {
                if !ri.is_zero() {
                    *wi = wi.sub(&c.mul(ri));
                }
            }
            for (ci, ti) in combo.iter_mut().zip(trans[r].iter()) {
                ci.add_mul_assign(&c, ti);
            }
        }
        if w.iter().all(|x| x.is_zero()) {
            Some(combo)
        } else {
            None
        }
    }

    /// Basis rows sorted by pivot column (the canonical rref order).
    pub fn into_sorted_rows(self) -> Vec<Vec<Scalar>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&r| self.pivots[r]);
        let mut rows = self.rows;
        let mut out = Vec::with_capacity(rows.len());
        for r in idx {
            out.push(std::mem::take(&mut rows[r]));
        }
        out
    }

    pub fn sorted_rows(&self) -> Vec<Vec<Scalar>> {
        self.clone().into_sorted_rows()
    }

    pub fn into_subspace(self) -> Subspace {
        let field = self.field;
        let ambient = self.ambient;
        let mut pivots = self.pivots.clone();
        pivots.sort_unstable();
        let basis = self.into_sorted_rows();
        Subspace { ambient, field, basis, pivots }
    }
}

/// A precomputed elimination of `a`, for solving `a x = b` repeatedly.
/// Solutions zero the free variables (pivot convention).
pub struct LinearSolver {
    a: Matrix,
    trans: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl LinearSolver {
    pub fn new(a: Matrix) -> LinearSolver {
        let field = a.field;
        let mut rs = RowSpace::with_transform(field, a.cols);
        for r in 0..a.rows {
            rs.insert(a.row_vec(r));
        }
        let mut idx: Vec<usize> = (0..rs.rows.len()).collect();
        idx.sort_by_key(|&r| rs.pivots[r]);
        let mut trans = Vec::new();
        let mut pivots = Vec::new();
        for &r in &idx {
            let mut t = rs.trans.as_ref().unwrap()[r].clone();
            t.resize(a.rows, field.zero());
            trans.push(t);
            pivots.push(rs.pivots[r]);
        }
        LinearSolver { a, trans, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.a.rows, "rhs length mismatch");
        let field = self.a.field;
        let mut x = vec![field.zero(); self.a.cols];
        for (row_i, pc) in self.pivots.iter().enumerate() {
            let mut y = field.zero();
            for (t, bv) in self.trans[row_i].iter().zip(b.iter()) {
                y.add_mul_assign(t, bv);
            }
            x[*pc] = y;
        }
        let ax = self.a.mat_vec(&x);
        if ax.iter().zip(b.iter()).all(|(u, v)| u == v) {
            Some(x)
        } else {
            None
        }
    }
}

/// A solution space of a homogeneous linear system over `n` unknowns, refined
/// by imposing constraint rows in batches. Used for centroid-style systems
/// where materializing the full constraint matrix would be wasteful.
pub enum SolutionSpace {
    /// All of `K^n`, possibly restricted to a support set of coordinates
    /// (coordinates outside the support are pinned to zero).
    Free { field: Field, n: usize, support: Vec<usize> },
    /// Spanned by explicit basis vectors.
    Basis { field: Field, n: usize, basis: Vec<Vec<Scalar>> },
}

impl SolutionSpace {
    pub fn full(field: Field, n: usize) -> SolutionSpace {
        SolutionSpace::Free { field, n, support: (0..n).collect() }
    }

    pub fn with_support(field: Field, n: usize, support: Vec<usize>) -> SolutionSpace {
        SolutionSpace::Free { field, n, support }
    }

    pub fn dim(&self) -> usize {
        match self {
            SolutionSpace::Free { support, .. } => support.len(),
            SolutionSpace::Basis { basis, .. } => basis.len(),
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            SolutionSpace::Free { n, .. } | SolutionSpace::Basis { n, .. } => *n,
        }
    }

    /// Imposes sparse constraint rows `sum_i row[i] * x_i = 0`. Each row is a
    /// list of `(index, coeff)`.
    pub fn impose_sparse_rows<I>(&mut self, rows: I)
    where
        I: IntoIterator<Item = Vec<(usize, Scalar)>>,
    {
        let field = match self {
            SolutionSpace::Free { field, .. } | SolutionSpace::Basis { field, .. } => *field,
        };
        match self {
            SolutionSpace::Free { n, support, .. } => {
                // Solve in the support coordinates.
                let pos: std::collections::BTreeMap<usize, usize> =
                    support.iter().enumerate().map(|(k, &i)| (i, k)).collect();
                let m = support.len();
                let mut rs = RowSpace::new(field, m);
                for row in rows {
                    let mut dense = vec![field.zero(); m];
                    let mut touched = false;
                    for (i, c) in row {
                        // terms on zero-pinned coordinates vanish identically
                        if let Some(&k) = pos.get(&i) {
                            dense[k] = dense[k].add(&c);
                            touched = true;
                        }
                    }
                    if touched {
                        rs.insert(dense);
                        if rs.rank() == m {
                            break;
                        }
                    }
                }
                let constraint = Matrix::from_rows(field, rs.sorted_rows());
                let ker = if constraint.rows == 0 {
                    Subspace::full(field, m)
                } else {
                    kernel_basis(&constraint)
                };
                let n_amb = *n;
                let mut basis = Vec::new();
                for small in ker.basis_rows() {
                    let mut v = vec![field.zero(); n_amb];
                    for (k, c) in small.iter().enumerate() {
                        if !c.is_zero() {
                            v[support[k]] = c.clone();
                        }
                    }
                    basis.push(v);
                }
                *self = SolutionSpace::Basis { field, n: n_amb, basis };
            }
            SolutionSpace::Basis { n, basis, .. } => {
                if basis.is_empty() {
                    return;
                }
                let d = basis.len();
                let mut rs = RowSpace::new(field, d);
                for row in rows {
                    let mut coeff = vec![field.zero(); d];
                    let mut nonzero = false;
                    for (t, bv) in basis.iter().enumerate() {
                        let mut acc = field.zero();
                        for (i, c) in &row {
                            acc.add_mul_assign(c, &bv[*i]);
                        }
                        if !acc.is_zero() {
                            nonzero = true;
                        }
                        coeff[t] = acc;
                    }
                    if nonzero {
                        rs.insert(coeff);
                        if rs.rank() == d {
                            break;
                        }
                    }
                }
                if rs.rank() == 0 {
                    return;
                }
                let constraint = Matrix::from_rows(field, rs.sorted_rows());
                let ker = kernel_basis(&constraint);
                let mut new_basis = Vec::new();
                for combo in ker.basis_rows() {
                    let mut v = vec![field.zero(); *n];
                    for (t, c) in combo.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (vi, bi) in v.iter_mut().zip(basis[t].iter()) {
                            vi.add_mul_assign(c, bi);
                        }
                    }
                    new_basis.push(v);
                }
                *basis = new_basis;
            }
        }
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        match self {
            SolutionSpace::Free { field, n, support } => support
                .iter()
                .map(|&i| unit_vec(*field, *n, i))
                .collect(),
            SolutionSpace::Basis { basis, .. } => basis.clone(),
        }
    }
}
