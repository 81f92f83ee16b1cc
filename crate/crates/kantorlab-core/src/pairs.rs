//! Trilinear pairs `P = (P^-, P^+)` with products `{.,.,.}^s : P^s x P^-s x P^s -> P^s`,
//! their D- and K-operators, opposites, doubles, centroids, gradings and
//! homomorphism checks.
//!
//! Product tensors are stored sparsely: `(sigma, i, j, k) -> coefficient vector`,
//! zero entries omitted, with `i, k, a` indexing the sigma side and `j` the
//! opposite side.

use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, SolutionSpace, Subspace};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// One of the two sides of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    /// +1 or -1 as a field element.
    pub fn scalar(self, field: Field) -> Scalar {
        match self {
            Sign::Minus => field.from_i64(-1),
            Sign::Plus => field.one(),
        }
    }

    pub fn unit(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn idx(self) -> usize {
        match self {
            Sign::Minus => 0,
            Sign::Plus => 1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Minus => "-",
            Sign::Plus => "+",
        }
    }

    pub fn from_symbol(s: &str) -> Result<Sign> {
        match s {
            "-" => Ok(Sign::Minus),
            "+" => Ok(Sign::Plus),
            _ => Err(Error::Parse(format!("bad sign {s:?}"))),
        }
    }
}

/// Sparse product tensor of one side: `(i, j, k) -> sum_a c_a e_a`.
pub type ProductTensor = BTreeMap<(usize, usize, usize), Vec<(usize, Scalar)>>;

/// A trilinear pair over an exact field.
#[derive(Debug, Clone, PartialEq)]
pub struct TrilinearPair {
    pub field: Field,
    dims: [usize; 2],
    products: [ProductTensor; 2],
    /// Optional short-Peirce labels (degree of each basis vector, in {0,1}).
    pub sp_labels: Option<[Vec<i64>; 2]>,
}

impl TrilinearPair {
    pub fn new(field: Field, dim_minus: usize, dim_plus: usize) -> TrilinearPair {
        TrilinearPair {
            field,
            dims: [dim_minus, dim_plus],
            products: [BTreeMap::new(), BTreeMap::new()],
            sp_labels: None,
        }
    }

    pub fn dim(&self, sigma: Sign) -> usize {
        self.dims[sigma.idx()]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dims[0], self.dims[1])
    }

    pub fn tensor(&self, sigma: Sign) -> &ProductTensor {
        &self.products[sigma.idx()]
    }

    /// Adds `c * e_a` to the product `{e_i, e_j, e_k}^sigma`.
    pub fn add_product_term(&mut self, sigma: Sign, i: usize, j: usize, k: usize, a: usize, c: Scalar) {
        assert!(i < self.dim(sigma) && k < self.dim(sigma) && a < self.dim(sigma));
        assert!(j < self.dim(sigma.flip()));
        if c.is_zero() {
            return;
        }
        let entry = self.products[sigma.idx()].entry((i, j, k)).or_default();
        match entry.binary_search_by_key(&a, |(x, _)| *x) {
            Ok(pos) => {
                entry[pos].1 = entry[pos].1.add(&c);
                if entry[pos].1.is_zero() {
                    entry.remove(pos);
                }
            }
            Err(pos) => entry.insert(pos, (a, c)),
        }
        if self.products[sigma.idx()][&(i, j, k)].is_empty() {
            self.products[sigma.idx()].remove(&(i, j, k));
        }
    }

    pub fn set_basis_product(&mut self, sigma: Sign, i: usize, j: usize, k: usize, out: Vec<(usize, Scalar)>) {
        let mut out: Vec<(usize, Scalar)> = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by_key(|(a, _)| *a);
        if out.is_empty() {
            self.products[sigma.idx()].remove(&(i, j, k));
        } else {
            self.products[sigma.idx()].insert((i, j, k), out);
        }
    }

    pub fn basis_product(&self, sigma: Sign, i: usize, j: usize, k: usize) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim(sigma)];
        if let Some(terms) = self.products[sigma.idx()].get(&(i, j, k)) {
            for (a, c) in terms {
                out[*a] = c.clone();
            }
        }
        out
    }

    /// `{x, y, z}^sigma` by trilinear expansion of the stored tensor.
    pub fn triple_product(&self, sigma: Sign, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Result<Vec<Scalar>> {
        let (ds, dn) = (self.dim(sigma), self.dim(sigma.flip()));
        if x.len() != ds || z.len() != ds || y.len() != dn {
            return Err(Error::Shape(format!(
                "triple_product: got ({}, {}, {}), pair has sigma-dim {ds}, opposite dim {dn}",
                x.len(),
                y.len(),
                z.len()
            )));
        }
        let mut out = vec![self.field.zero(); ds];
        for ((i, j, k), terms) in &self.products[sigma.idx()] {
            if x[*i].is_zero() || y[*j].is_zero() || z[*k].is_zero() {
                continue;
            }
            let coeff = x[*i].mul(&y[*j]).mul(&z[*k]);
            for (a, c) in terms {
                out[*a].add_mul_assign(&coeff, c);
            }
        }
        Ok(out)
    }

    /// `D^sigma(x, y)` as a matrix on the sigma side: `D(x,y) z = {x,y,z}`.
    pub fn d_operator(&self, sigma: Sign, x: &[Scalar], y: &[Scalar]) -> Result<Matrix> {
        let (ds, dn) = (self.dim(sigma), self.dim(sigma.flip()));
        if x.len() != ds || y.len() != dn {
            return Err(Error::Shape("d_operator: wrong coordinate lengths".into()));
        }
        let mut m = Matrix::zero(self.field, ds, ds);
        for ((i, j, k), terms) in &self.products[sigma.idx()] {
            if x[*i].is_zero() || y[*j].is_zero() {
                continue;
            }
            let coeff = x[*i].mul(&y[*j]);
            for (a, c) in terms {
                let cur = m.get(*a, *k).add(&coeff.mul(c));
                m.set(*a, *k, cur);
            }
        }
        Ok(m)
    }

    /// `K^sigma(x, z)` as a matrix from the opposite side to the sigma side:
    /// `K(x,z) y = {x,y,z} - {z,y,x}`.
    pub fn k_operator(&self, sigma: Sign, x: &[Scalar], z: &[Scalar]) -> Result<Matrix> {
        let (ds, dn) = (self.dim(sigma), self.dim(sigma.flip()));
        if x.len() != ds || z.len() != ds {
            return Err(Error::Shape("k_operator: wrong coordinate lengths".into()));
        }
        let mut m = Matrix::zero(self.field, ds, dn);
        for ((i, j, k), terms) in &self.products[sigma.idx()] {
            // contribution of {x, e_j, z} - {z, e_j, x}
            let direct = x[*i].mul(&z[*k]);
            let swapped = z[*i].mul(&x[*k]);
            let coeff = direct.sub(&swapped);
            if coeff.is_zero() {
                continue;
            }
            for (a, c) in terms {
                let cur = m.get(*a, *j).add(&coeff.mul(c));
                m.set(*a, *j, cur);
            }
        }
        Ok(m)
    }

    /// Sparse `D(e_i, e_j)` matrices for all basis pairs with nonzero action.
    pub fn d_operator_basis(&self, sigma: Sign) -> BasisOperators {
        let ds = self.dim(sigma);
        let dn = self.dim(sigma.flip());
        let mut mats: BTreeMap<(usize, usize), SparseMat> = BTreeMap::new();
        for ((i, j, k), terms) in &self.products[sigma.idx()] {
            let m = mats.entry((*i, *j)).or_insert_with(|| SparseMat::new(ds, ds));
            for (a, c) in terms {
                m.add(*a, *k, c.clone());
            }
        }
        BasisOperators { n_left: ds, n_right: dn, mats }
    }

    /// Sparse `K(e_i, e_k)` matrices for all basis pairs with nonzero action.
    pub fn k_operator_basis(&self, sigma: Sign) -> BasisOperators {
        let ds = self.dim(sigma);
        let dn = self.dim(sigma.flip());
        let mut mats: BTreeMap<(usize, usize), SparseMat> = BTreeMap::new();
        for ((i, j, k), terms) in &self.products[sigma.idx()] {
            for (a, c) in terms {
                // K(e_i, e_k) e_j gains +c e_a, K(e_k, e_i) e_j gains -c e_a
                mats.entry((*i, *k))
                    .or_insert_with(|| SparseMat::new(ds, dn))
                    .add(*a, *j, c.clone());
                mats.entry((*k, *i))
                    .or_insert_with(|| SparseMat::new(ds, dn))
                    .add(*a, *j, c.neg());
            }
        }
        mats.retain(|_, m| !m.is_empty());
        BasisOperators { n_left: ds, n_right: dn, mats }
    }

    /// The opposite pair: sides swapped, sigma-product taken from the old
    /// (-sigma)-product, SP labels carried over per side.
    pub fn opposite_pair(&self) -> TrilinearPair {
        TrilinearPair {
            field: self.field,
            dims: [self.dims[1], self.dims[0]],
            products: [self.products[1].clone(), self.products[0].clone()],
            sp_labels: self.sp_labels.as_ref().map(|l| [l[1].clone(), l[0].clone()]),
        }
    }

    /// Direct sum of two pairs on the concatenated bases.
    pub fn direct_sum(&self, other: &TrilinearPair) -> TrilinearPair {
        assert_eq!(self.field, other.field);
        let mut out = TrilinearPair::new(
            self.field,
            self.dims[0] + other.dims[0],
            self.dims[1] + other.dims[1],
        );
        for sigma in Sign::BOTH {
            let (off_s, off_n) = (self.dim(sigma), self.dim(sigma.flip()));
            for ((i, j, k), terms) in self.tensor(sigma) {
                out.set_basis_product(sigma, *i, *j, *k, terms.clone());
            }
            for ((i, j, k), terms) in other.tensor(sigma) {
                let shifted = terms.iter().map(|(a, c)| (a + off_s, c.clone())).collect();
                out.set_basis_product(sigma, i + off_s, j + off_n, k + off_s, shifted);
            }
        }
        if let (Some(a), Some(b)) = (&self.sp_labels, &other.sp_labels) {
            out.sp_labels = Some([
                a[0].iter().chain(b[0].iter()).copied().collect(),
                a[1].iter().chain(b[1].iter()).copied().collect(),
            ]);
        }
        out
    }

    /// True iff all K-operators vanish, i.e. the tensor is symmetric in the
    /// outer slots on both sides.
    pub fn is_jordan(&self) -> bool {
        for sigma in Sign::BOTH {
            let t = &self.products[sigma.idx()];
            for ((i, j, k), terms) in t {
                let mirrored: Vec<(usize, Scalar)> = t.get(&(*k, *j, *i)).cloned().unwrap_or_default();
                if &mirrored != terms {
                    return false;
                }
            }
        }
        true
    }

    /// Checks that `omega` intertwines the products of `self` and `target` on
    /// all basis triples (exhaustive by multilinearity).
    pub fn check_homomorphism(&self, target: &TrilinearPair, omega: &PairMap) -> Result<bool> {
        for sigma in Sign::BOTH {
            let m = &omega.components[sigma.idx()];
            if m.cols != self.dim(sigma) || m.rows != target.dim(sigma) {
                return Err(Error::Shape("check_homomorphism: component shape mismatch".into()));
            }
        }
        for sigma in Sign::BOTH {
            let ds = self.dim(sigma);
            let dn = self.dim(sigma.flip());
            let om_s = &omega.components[sigma.idx()];
            let om_n = &omega.components[sigma.flip().idx()];
            let img_s: Vec<Vec<Scalar>> = (0..ds).map(|i| col(om_s, i)).collect();
            let img_n: Vec<Vec<Scalar>> = (0..dn).map(|j| col(om_n, j)).collect();
            for i in 0..ds {
                for j in 0..dn {
                    for k in 0..ds {
                        let lhs = om_s.mat_vec(&self.basis_product(sigma, i, j, k));
                        let rhs = target.triple_product(sigma, &img_s[i], &img_n[j], &img_s[k])?;
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Verifies a grading: every nonzero tensor entry must satisfy
    /// `deg a = deg i - deg j + deg k` (degrees in `Z^2`; embed `Z` as the
    /// first coordinate).
    pub fn check_grading(&self, labels: &[Vec<(i64, i64)>; 2]) -> GradingReport {
        let mut violations = Vec::new();
        for sigma in Sign::BOTH {
            assert_eq!(labels[sigma.idx()].len(), self.dim(sigma), "label list length");
            let ls = &labels[sigma.idx()];
            let ln = &labels[sigma.flip().idx()];
            for ((i, j, k), terms) in self.tensor(sigma) {
                let want = (
                    ls[*i].0 - ln[*j].0 + ls[*k].0,
                    ls[*i].1 - ln[*j].1 + ls[*k].1,
                );
                for (a, _) in terms {
                    if ls[*a] != want {
                        violations.push(GradingViolation { sigma, i: *i, j: *j, k: *k, a: *a });
                    }
                }
            }
        }
        GradingReport { ok: violations.is_empty(), violations }
    }

    /// Checks the stored SP labels as a Z-grading with support in {0, 1}.
    pub fn check_sp_grading(&self) -> Result<GradingReport> {
        let labels = self
            .sp_labels
            .as_ref()
            .ok_or_else(|| Error::Precondition("pair has no SP labels".into()))?;
        for side in labels {
            if side.iter().any(|&l| l != 0 && l != 1) {
                return Err(Error::Grading("SP label outside {0, 1}".into()));
            }
        }
        let z2: [Vec<(i64, i64)>; 2] = [
            labels[0].iter().map(|&l| (l, 0)).collect(),
            labels[1].iter().map(|&l| (l, 0)).collect(),
        ];
        Ok(self.check_grading(&z2))
    }

    /// Basis of the pair centroid inside `End(P^-) + End(P^+)`, flattened as
    /// `[omega^- entries (row major) | omega^+ entries]`.
    pub fn centroid_pair(&self) -> Subspace {
        let field = self.field;
        let (dm, dp) = (self.dims[0], self.dims[1]);
        let n_unknowns = dm * dm + dp * dp;
        let off = [0usize, dm * dm];
        let dim_of = [dm, dp];

        // Stage 0 (acceleration only, no arithmetic): any diagonal basis
        // D-operator forces omega^s to preserve its eigenspaces, since
        // omega^s D(e_i, e_j) = D(e_i, e_j) omega^s is one of the defining
        // equations. Joint eigenvalue filtering pins incompatible entries to
        // zero before any elimination runs.
        let mut support: Vec<usize> = Vec::new();
        for sigma in Sign::BOTH {
            let d = dim_of[sigma.idx()];
            let ops = self.d_operator_basis(sigma);
            let dn = dim_of[sigma.flip().idx()];
            let mut eigs: Vec<Vec<Scalar>> = Vec::new();
            for i in 0..d {
                for j in 0..dn {
                    if let Some(m) = ops.get(i, j) {
                        if m.entries().all(|((r, c), _)| r == c) {
                            let mut e = vec![field.zero(); d];
                            for ((r, _), v) in m.entries() {
                                e[*r] = v.clone();
                            }
                            eigs.push(e);
                        }
                    }
                }
            }
            for a in 0..d {
                for b in 0..d {
                    if eigs.iter().all(|e| e[a] == e[b]) {
                        support.push(off[sigma.idx()] + a * d + b);
                    }
                }
            }
        }
        support.sort_unstable();
        let mut space = SolutionSpace::with_support(field, n_unknowns, support);

        // Stage 2: the full defining equations on all basis triples, streamed
        // in chunks so constraint rows are never all materialized at once.
        for sigma in Sign::BOTH {
            let ds = dim_of[sigma.idx()];
            let dn = dim_of[sigma.flip().idx()];
            let so = off[sigma.idx()];
            let no = off[sigma.flip().idx()];
            for i in 0..ds {
                let mut chunk: Vec<Vec<(usize, Scalar)>> = Vec::new();
                for j in 0..dn {
                    for k in 0..ds {
                        let prod = self.basis_product(sigma, i, j, k);
                        for a in 0..ds {
                            let lhs_terms: Vec<(usize, Scalar)> = prod
                                .iter()
                                .enumerate()
                                .filter(|(_, pt)| !pt.is_zero())
                                .map(|(t, pt)| (so + a * ds + t, pt.clone()))
                                .collect();
                            // (1) omega^s {i,j,k} = {omega^s e_i, e_j, e_k}
                            let mut row = lhs_terms.clone();
                            for t in 0..ds {
                                let c = self.product_coeff(sigma, t, j, k, a);
                                if !c.is_zero() {
                                    row.push((so + t * ds + i, c.neg()));
                                }
                            }
                            if !row.is_empty() {
                                chunk.push(row);
                            }
                            // (2) omega^s {i,j,k} = {e_i, omega^{-s} e_j, e_k}
                            let mut row = lhs_terms.clone();
                            for t in 0..dn {
                                let c = self.product_coeff(sigma, i, t, k, a);
                                if !c.is_zero() {
                                    row.push((no + t * dn + j, c.neg()));
                                }
                            }
                            if !row.is_empty() {
                                chunk.push(row);
                            }
                            // (3) omega^s {i,j,k} = {e_i, e_j, omega^s e_k}
                            let mut row = lhs_terms;
                            for t in 0..ds {
                                let c = self.product_coeff(sigma, i, j, t, a);
                                if !c.is_zero() {
                                    row.push((so + t * ds + k, c.neg()));
                                }
                            }
                            if !row.is_empty() {
                                chunk.push(row);
                            }
                        }
                    }
                }
                space.impose_sparse_rows(chunk);
            }
        }
        Subspace::from_rows(field, n_unknowns, space.basis_vectors())
    }

    fn product_coeff(&self, sigma: Sign, i: usize, j: usize, k: usize, a: usize) -> Scalar {
        if let Some(terms) = self.products[sigma.idx()].get(&(i, j, k)) {
            if let Ok(pos) = terms.binary_search_by_key(&a, |(x, _)| *x) {
                return terms[pos].1.clone();
            }
        }
        self.field.zero()
    }
}

fn col(m: &Matrix, j: usize) -> Vec<Scalar> {
    (0..m.rows).map(|i| m.get(i, j).clone()).collect()
}

/// The double (or signed double) of a triple system given by its tensor.
pub fn double_of_triple(field: Field, dim: usize, tensor: &ProductTensor, signed: bool) -> TrilinearPair {
    let mut p = TrilinearPair::new(field, dim, dim);
    for sigma in Sign::BOTH {
        let flip = signed && sigma == Sign::Minus;
        for ((i, j, k), terms) in tensor {
            let out = terms
                .iter()
                .map(|(a, c)| (*a, if flip { c.neg() } else { c.clone() }))
                .collect();
            p.set_basis_product(sigma, *i, *j, *k, out);
        }
    }
    p
}

/// A pair of linear maps `(omega^-, omega^+)`; columns index the source basis.
#[derive(Debug, Clone)]
pub struct PairMap {
    pub components: [Matrix; 2],
}

impl PairMap {
    pub fn new(minus: Matrix, plus: Matrix) -> PairMap {
        PairMap { components: [minus, plus] }
    }

    pub fn identity(field: Field, dim_minus: usize, dim_plus: usize) -> PairMap {
        PairMap::new(Matrix::identity(field, dim_minus), Matrix::identity(field, dim_plus))
    }

    pub fn is_bijective(&self) -> bool {
        self.components.iter().all(|m| {
            m.rows == m.cols && {
                let (_, rank, _) = crate::linalg::rref(m);
                rank == m.rows
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradingViolation {
    pub sigma: Sign,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub a: usize,
}

#[derive(Debug, Clone)]
pub struct GradingReport {
    pub ok: bool,
    pub violations: Vec<GradingViolation>,
}

/// A sparse matrix keyed `(row, col) -> scalar`.
#[derive(Debug, Clone)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMat {
    pub fn new(rows: usize, cols: usize) -> SparseMat {
        SparseMat { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_matrix(m: &Matrix) -> SparseMat {
        let mut s = SparseMat::new(m.rows, m.cols);
        for r in 0..m.rows {
            for c in 0..m.cols {
                let v = m.get(r, c);
                if !v.is_zero() {
                    s.entries.insert((r, c), v.clone());
                }
            }
        }
        s
    }

    pub fn add(&mut self, r: usize, c: usize, v: Scalar) {
        if v.is_zero() {
            return;
        }
        match self.entries.entry((r, c)) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let nv = e.get().add(&v);
                if nv.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = nv;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    /// self * rhs
    pub fn mul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, rhs.rows);
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for ((r, c), v) in &rhs.entries {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut out = SparseMat::new(self.rows, rhs.cols);
        for ((r, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, b) in row {
                    out.add(*r, *c, a.mul(b));
                }
            }
        }
        out
    }

    pub fn sub_assign(&mut self, rhs: &SparseMat) {
        for ((r, c), v) in &rhs.entries {
            self.add(*r, *c, v.neg());
        }
    }

    pub fn add_assign_scaled(&mut self, rhs: &SparseMat, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for ((r, cc), v) in &rhs.entries {
            self.add(*r, *cc, v.mul(c));
        }
    }

    pub fn apply(&self, field: Field, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![field.zero(); self.rows];
        for ((r, c), a) in &self.entries {
            if !v[*c].is_zero() {
                out[*r] = out[*r].add(&a.mul(&v[*c]));
            }
        }
        out
    }

    /// Column of the matrix as sparse terms.
    pub fn column(&self, field: Field, c: usize) -> Vec<(usize, Scalar)> {
        let _ = field;
        self.entries
            .range((0, c)..=(self.rows, c))
            .filter(|((_, cc), _)| *cc == c)
            .map(|((r, _), v)| (*r, v.clone()))
            .collect()
    }
}

/// Precomputed basis-pair operators: `(left index, right index) -> matrix`.
pub struct BasisOperators {
    pub n_left: usize,
    pub n_right: usize,
    mats: BTreeMap<(usize, usize), SparseMat>,
}

impl BasisOperators {
    pub fn get(&self, i: usize, j: usize) -> Option<&SparseMat> {
        self.mats.get(&(i, j))
    }

    /// `sum_i c_i Op(e_i, e_j)` for sparse left coordinates.
    pub fn combine_left(&self, left: &[(usize, Scalar)], j: usize, rows: usize, cols: usize) -> SparseMat {
        let mut out = SparseMat::new(rows, cols);
        for (i, c) in left {
            if let Some(m) = self.mats.get(&(*i, j)) {
                out.add_assign_scaled(m, c);
            }
        }
        out
    }
}

#[cfg(test)]
pub(crate) fn one_dim_jordan(field: Field) -> TrilinearPair {
    // {x, y, z} = 2xyz on both sides
    let mut p = TrilinearPair::new(field, 1, 1);
    for sigma in Sign::BOTH {
        p.set_basis_product(sigma, 0, 0, 0, vec![(0, field.from_i64(2))]);
    }
    p
}
