//! Finite-dimensional Lie algebras given by structure constants on a fixed
//! basis, carrying a `Z^2`-valued degree map. Pure `Z`-gradings embed in the
//! first coordinate.
//!
//! Structure constants are keyed on `i < j` only; antisymmetry and the zero
//! diagonal are structural.

use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, SolutionSpace, Subspace};
use crate::pairs::SparseMat;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// Indicates which part of the `Z^2` degree data is "the" grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradingKind {
    /// Pure `Z`-grading stored in the first coordinate (second is zero).
    Z,
    /// Full `Z^2`-grading (the BC2 case, in root-base coordinates).
    Z2,
}

pub type Degree = (i64, i64);

#[derive(Debug, Clone, PartialEq)]
pub struct GradedLieAlgebra {
    pub field: Field,
    pub dim: usize,
    pub degrees: Vec<Degree>,
    pub grading: GradingKind,
    /// `(i, j) -> [(k, c)]` for `i < j`, sorted by `k`, zeros omitted.
    brackets: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

impl GradedLieAlgebra {
    pub fn new(field: Field, degrees: Vec<Degree>, grading: GradingKind) -> GradedLieAlgebra {
        GradedLieAlgebra { field, dim: degrees.len(), degrees, grading, brackets: BTreeMap::new() }
    }

    pub fn abelian(field: Field, dim: usize) -> GradedLieAlgebra {
        GradedLieAlgebra::new(field, vec![(0, 0); dim], GradingKind::Z)
    }

    /// Sets `[e_i, e_j]` for `i != j`; the `(j, i)` bracket is implied.
    pub fn set_bracket(&mut self, i: usize, j: usize, out: Vec<(usize, Scalar)>) {
        assert!(i != j, "diagonal brackets are identically zero");
        assert!(i < self.dim && j < self.dim);
        let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
        let mut out: Vec<(usize, Scalar)> = out
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, if flip { c.neg() } else { c }))
            .collect();
        out.sort_by_key(|(k, _)| *k);
        if out.is_empty() {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, out);
        }
    }

    pub fn bracket_terms(&self, i: usize, j: usize) -> Vec<(usize, Scalar)> {
        if i == j {
            return Vec::new();
        }
        let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.brackets.get(&key) {
            None => Vec::new(),
            Some(terms) => {
                if flip {
                    terms.iter().map(|(k, c)| (*k, c.neg())).collect()
                } else {
                    terms.clone()
                }
            }
        }
    }

    pub fn stored_brackets(&self) -> &BTreeMap<(usize, usize), Vec<(usize, Scalar)>> {
        &self.brackets
    }

    /// `[x, y]` for arbitrary coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::Shape("bracket: coordinate length".into()));
        }
        let mut out = vec![self.field.zero(); self.dim];
        for ((i, j), terms) in &self.brackets {
            let c = x[*i].mul(&y[*j]).sub(&x[*j].mul(&y[*i]));
            if c.is_zero() {
                continue;
            }
            for (k, v) in terms {
                out[*k].add_mul_assign(&c, v);
            }
        }
        Ok(out)
    }

    /// `ad(e_i)` as a sparse matrix.
    pub fn ad_basis(&self, i: usize) -> SparseMat {
        let mut m = SparseMat::new(self.dim, self.dim);
        for j in 0..self.dim {
            if i == j {
                continue;
            }
            for (k, c) in self.bracket_terms(i, j) {
                m.add(k, j, c);
            }
        }
        m
    }

    pub fn ad_vector(&self, x: &[Scalar]) -> SparseMat {
        let mut m = SparseMat::new(self.dim, self.dim);
        for ((i, j), terms) in &self.brackets {
            for (k, c) in terms {
                if !x[*i].is_zero() {
                    m.add(*k, *j, x[*i].mul(c));
                }
                if !x[*j].is_zero() {
                    m.add(*k, *i, x[*j].mul(c).neg());
                }
            }
        }
        m
    }

    /// Checks the Jacobi identity on all basis triples `i < j < k`; returns
    /// the first violating triple in lexicographic order if any.
    pub fn jacobi_check(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        pairs
            .par_iter()
            .filter_map(|&(i, j)| {
                (((j + 1)..n).find(|&k| !self.jacobi_holds(i, j, k))).map(|k| (i, j, k))
            })
            .min()
    }

    fn jacobi_holds(&self, i: usize, j: usize, k: usize) -> bool {
        let mut acc = vec![self.field.zero(); self.dim];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for (t, v) in self.bracket_terms(a, b) {
                for (u, w) in self.bracket_terms(t, c) {
                    acc[u].add_mul_assign(&v, &w);
                }
            }
        }
        acc.iter().all(|s| s.is_zero())
    }

    /// Verifies that all degrees lie in `allowed` and every nonzero bracket is
    /// degree-additive.
    pub fn grading_check(&self, allowed: &BTreeSet<Degree>) -> GradingLieReport {
        let mut bad_degrees = Vec::new();
        let mut bad_brackets = Vec::new();
        for (i, d) in self.degrees.iter().enumerate() {
            if !allowed.contains(d) {
                bad_degrees.push(i);
            }
        }
        for ((i, j), terms) in &self.brackets {
            let want = (
                self.degrees[*i].0 + self.degrees[*j].0,
                self.degrees[*i].1 + self.degrees[*j].1,
            );
            for (k, _) in terms {
                if self.degrees[*k] != want {
                    bad_brackets.push((*i, *j, *k));
                }
            }
        }
        GradingLieReport {
            ok: bad_degrees.is_empty() && bad_brackets.is_empty(),
            bad_degrees,
            bad_brackets,
        }
    }

    /// Kernel of the stacked adjoint maps.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        if n == 0 {
            return Subspace::zero(self.field, 0);
        }
        let mut rows = Vec::new();
        for i in 0..n {
            let ad = self.ad_basis(i);
            let mut by_row: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
            for ((r, c), v) in ad.entries() {
                by_row.entry(*r).or_default().push((*c, v.clone()));
            }
            for (_, terms) in by_row {
                let mut row = vec![self.field.zero(); n];
                for (c, v) in terms {
                    row[c] = v;
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return Subspace::full(self.field, n);
        }
        crate::linalg::kernel_basis(&Matrix::from_rows(self.field, rows))
    }

    /// Span of all brackets of basis pairs.
    pub fn derived_algebra(&self) -> Subspace {
        let mut rows = Vec::new();
        for terms in self.brackets.values() {
            let mut v = vec![self.field.zero(); self.dim];
            for (k, c) in terms {
                v[*k] = c.clone();
            }
            rows.push(v);
        }
        Subspace::from_rows(self.field, self.dim, rows)
    }

    /// Killing form `k_ij = tr(ad e_i ad e_j)` and its nondegeneracy.
    pub fn killing_form(&self) -> (Matrix, bool) {
        let n = self.dim;
        let ads: Vec<SparseMat> = (0..n).map(|i| self.ad_basis(i)).collect();
        // index ad_j entries by (row, col) -> scalar map for the trace pairing
        let maps: Vec<BTreeMap<(usize, usize), Scalar>> = ads
            .iter()
            .map(|m| m.entries().map(|(k, v)| (*k, v.clone())).collect())
            .collect();
        let entries: Vec<((usize, usize), Scalar)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let ads = &ads;
                let maps = &maps;
                let field = self.field;
                (i..n).map(move |j| {
                    let mut t = field.zero();
                    for ((r, c), v) in ads[i].entries() {
                        if let Some(w) = maps[j].get(&(*c, *r)) {
                            t = t.add(&v.mul(w));
                        }
                    }
                    ((i, j), t)
                })
            })
            .collect();
        let mut m = Matrix::zero(self.field, n, n);
        for ((i, j), v) in entries {
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
        let (_, rank, _) = crate::linalg::rref(&m);
        (m, rank == n)
    }

    /// Basis of the centroid, as flattened `n x n` matrices (row major).
    ///
    /// The defining equations on homogeneous basis vectors split into
    /// degree-shift blocks, so the centroid is computed block by block;
    /// `graded_only` restricts to the zero-shift block (the graded centroid).
    pub fn centroid_lie(&self, graded_only: bool) -> Subspace {
        let field = self.field;
        let n = self.dim;
        if n == 0 {
            return Subspace::zero(field, 0);
        }
        let mut by_degree: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
        for (i, d) in self.degrees.iter().enumerate() {
            by_degree.entry(*d).or_default().push(i);
        }
        let degrees: Vec<Degree> = by_degree.keys().copied().collect();
        let mut shifts: BTreeSet<Degree> = BTreeSet::new();
        if graded_only {
            shifts.insert((0, 0));
        } else {
            for a in &degrees {
                for b in &degrees {
                    shifts.insert((b.0 - a.0, b.1 - a.1));
                }
            }
        }
        // Stage 0: joint eigen filter from basis elements with diagonal ad.
        let mut diag_eigs: Vec<Vec<Scalar>> = Vec::new();
        for i in 0..n {
            let ad = self.ad_basis(i);
            if ad.entries().all(|((r, c), _)| r == c) {
                let mut eig = vec![field.zero(); n];
                for ((r, _), v) in ad.entries() {
                    eig[*r] = v.clone();
                }
                diag_eigs.push(eig);
            }
        }
        let compatible = |a: usize, b: usize| diag_eigs.iter().all(|e| e[a] == e[b]);

        let mut total_basis: Vec<Vec<Scalar>> = Vec::new();
        for d in shifts {
            // unknown entries chi[target, source] with deg(target) = deg(source) + d
            let mut support = Vec::new();
            for (g, idxs) in &by_degree {
                let tgt = (g.0 + d.0, g.1 + d.1);
                if let Some(tidx) = by_degree.get(&tgt) {
                    for &s in idxs {
                        for &t in tidx {
                            if compatible(s, t) {
                                support.push(t * n + s);
                            }
                        }
                    }
                }
            }
            if support.is_empty() {
                continue;
            }
            support.sort_unstable();
            let mut space = SolutionSpace::with_support(field, n * n, support);
            // Both slot conditions on every stored pair:
            //   chi [e_i, e_j] = [chi e_i, e_j]   and   chi [e_i, e_j] = [e_i, chi e_j];
            // rows per output coordinate k, with the LHS contributing
            // chi[k, t] * c_t and the RHS chi[t, i] * [e_t, e_j]_k (resp.
            // chi[t, j] * [e_i, e_t]_k). Rows are imposed per bracket key to
            // bound memory.
            for ((i, j), terms) in &self.brackets {
                let mut left_per_k: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
                let mut right_per_k: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
                for t in 0..n {
                    for (u, c) in self.bracket_terms(t, *j) {
                        left_per_k.entry(u).or_default().push((t * n + *i, c.neg()));
                    }
                    for (u, c) in self.bracket_terms(*i, t) {
                        right_per_k.entry(u).or_default().push((t * n + *j, c.neg()));
                    }
                }
                let mut rows = Vec::new();
                for k in 0..n {
                    let lhs: Vec<(usize, Scalar)> = terms
                        .iter()
                        .map(|(t, c)| (k * n + t, c.clone()))
                        .collect();
                    let mut row = lhs.clone();
                    if let Some(extra) = left_per_k.get(&k) {
                        row.extend(extra.iter().cloned());
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                    let mut row = lhs;
                    if let Some(extra) = right_per_k.get(&k) {
                        row.extend(extra.iter().cloned());
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
                space.impose_sparse_rows(rows);
            }
            total_basis.extend(space.basis_vectors());
        }
        Subspace::from_rows(field, n * n, total_basis)
    }

    /// Same algebra with degrees collapsed onto one component.
    pub fn component_grading(&self, first: bool) -> GradedLieAlgebra {
        let degrees = self
            .degrees
            .iter()
            .map(|d| if first { (d.0, 0) } else { (d.1, 0) })
            .collect();
        GradedLieAlgebra {
            field: self.field,
            dim: self.dim,
            degrees,
            grading: GradingKind::Z,
            brackets: self.brackets.clone(),
        }
    }

    /// Smallest bracket-closed subspace containing `seed`: bracket new basis
    /// rows against the current basis, re-reduce, repeat to a fixed point.
    pub fn subalgebra_generated(&self, seed: &Subspace) -> Subspace {
        assert_eq!(seed.ambient, self.dim);
        let mut rs = crate::linalg::RowSpace::new(self.field, self.dim);
        let mut frontier: Vec<Vec<Scalar>> = Vec::new();
        for row in seed.basis_rows() {
            if rs.insert(row.clone()) {
                frontier.push(row.clone());
            }
        }
        while !frontier.is_empty() {
            let current = rs.sorted_rows();
            let mut next = Vec::new();
            for f in &frontier {
                for c in &current {
                    let b = self.bracket(f, c).expect("dims fixed");
                    if rs.insert(b.clone()) {
                        next.push(b);
                    }
                }
            }
            frontier = next;
        }
        rs.into_subspace()
    }

    /// Direct sum on concatenated bases (degrees carried through).
    pub fn direct_sum(&self, other: &GradedLieAlgebra) -> GradedLieAlgebra {
        assert_eq!(self.field, other.field);
        let mut degrees = self.degrees.clone();
        degrees.extend(other.degrees.iter().copied());
        let mut out = GradedLieAlgebra::new(self.field, degrees, self.grading);
        for ((i, j), terms) in &self.brackets {
            out.set_bracket(*i, *j, terms.clone());
        }
        let off = self.dim;
        for ((i, j), terms) in &other.brackets {
            let shifted = terms.iter().map(|(k, c)| (k + off, c.clone())).collect();
            out.set_bracket(i + off, j + off, shifted);
        }
        out
    }

    /// Indices of basis vectors of a given degree.
    pub fn indices_of_degree(&self, d: Degree) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.degrees[i] == d).collect()
    }

    /// Indices whose first degree coordinate is `d1`.
    pub fn indices_of_first_degree(&self, d1: i64) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.degrees[i].0 == d1).collect()
    }

    /// Dimension count per first-component degree.
    pub fn degree_dims_first(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for d in &self.degrees {
            *m.entry(d.0).or_insert(0) += 1;
        }
        m
    }

    pub fn degree_dims_z2(&self) -> BTreeMap<Degree, usize> {
        let mut m = BTreeMap::new();
        for d in &self.degrees {
            *m.entry(*d).or_insert(0) += 1;
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct GradingLieReport {
    pub ok: bool,
    pub bad_degrees: Vec<usize>,
    pub bad_brackets: Vec<(usize, usize, usize)>,
}

/// `sl2` with basis (f, h, e) and degrees (-1, 0, 1).
#[cfg(test)]
pub(crate) fn sl2(field: Field) -> GradedLieAlgebra {
    let mut l = GradedLieAlgebra::new(field, vec![(-1, 0), (0, 0), (1, 0)], GradingKind::Z);
    l.set_bracket(1, 2, vec![(2, field.from_i64(2))]); // [h, e] = 2e
    l.set_bracket(1, 0, vec![(0, field.from_i64(-2))]); // [h, f] = -2f
    l.set_bracket(2, 0, vec![(1, field.one())]); // [e, f] = h
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_antisymmetry_and_alternation() {
        let f = Field::Q;
        let l = sl2(f);
        let e = crate::linalg::unit_vec(f, 3, 2);
        let h = crate::linalg::unit_vec(f, 3, 1);
        assert_eq!(l.bracket(&e, &e).unwrap(), vec![f.zero(); 3]);
        let he = l.bracket(&h, &e).unwrap();
        let eh = l.bracket(&e, &h).unwrap();
        assert_eq!(he, eh.iter().map(|x| x.neg()).collect::<Vec<_>>());
        assert_eq!(he, vec![f.zero(), f.zero(), f.from_i64(2)]);
    }

    #[test]
    fn jacobi_and_violations() {
        let f = Field::Q;
        assert!(GradedLieAlgebra::abelian(f, 4).jacobi_check().is_none());
        assert!(sl2(f).jacobi_check().is_none());
        let mut bad = sl2(f);
        bad.set_bracket(1, 2, vec![(2, f.from_i64(-2))]);
        assert_eq!(bad.jacobi_check(), Some((0, 1, 2)));
    }

    #[test]
    fn grading_check_and_component() {
        let f = Field::Q;
        let l = sl2(f);
        let allowed: BTreeSet<Degree> = [(-1, 0), (0, 0), (1, 0)].into_iter().collect();
        assert!(l.grading_check(&allowed).ok);
        let mut moved = l.clone();
        moved.degrees[2] = (5, 0);
        assert!(!moved.grading_check(&allowed).ok);
        let c = l.component_grading(false);
        assert!(c.degrees.iter().all(|d| *d == (0, 0)));
    }

    #[test]
    fn center_and_derived() {
        let f = Field::Q;
        let ab = GradedLieAlgebra::abelian(f, 3);
        assert_eq!(ab.center().dim(), 3);
        assert_eq!(ab.derived_algebra().dim(), 0);
        let l = sl2(f);
        assert_eq!(l.center().dim(), 0);
        assert_eq!(l.derived_algebra().dim(), 3);
    }

    #[test]
    fn killing_form_sl2() {
        let f = Field::Q;
        let (k, nondeg) = sl2(f).killing_form();
        assert!(nondeg);
        assert_eq!(k.get(1, 1), &f.from_i64(8));
        let (kz, nz) = GradedLieAlgebra::abelian(f, 2).killing_form();
        assert!(kz.is_zero() && !nz);
    }

    #[test]
    fn killing_symmetric_invariant() {
        let f = Field::Q;
        let l = sl2(f);
        let (k, _) = l.killing_form();
        assert_eq!(k, k.transpose());
        for i in 0..3 {
            for j in 0..3 {
                for t in 0..3 {
                    let xy = l.bracket_terms(i, j);
                    let yz = l.bracket_terms(j, t);
                    let mut lhs = f.zero();
                    for (u, c) in &xy {
                        lhs.add_mul_assign(c, k.get(*u, t));
                    }
                    let mut rhs = f.zero();
                    for (u, c) in &yz {
                        rhs.add_mul_assign(c, k.get(i, *u));
                    }
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn centroid_dims() {
        let f = Field::Q;
        assert_eq!(sl2(f).centroid_lie(false).dim(), 1);
        assert_eq!(GradedLieAlgebra::abelian(f, 2).centroid_lie(false).dim(), 4);
        assert_eq!(sl2(f).centroid_lie(true).dim(), 1);
        let two = sl2(f).direct_sum(&sl2(f));
        assert_eq!(two.centroid_lie(false).dim(), 2);
    }

    #[test]
    fn centroid_contains_identity() {
        let f = Field::Q;
        let l = sl2(f);
        let c = l.centroid_lie(false);
        let id = Matrix::identity(f, 3).flatten();
        assert!(c.contains_vec(&id));
    }

    #[test]
    fn subalgebra_generation() {
        let f = Field::Q;
        let l = sl2(f);
        let zero = Subspace::zero(f, 3);
        assert_eq!(l.subalgebra_generated(&zero).dim(), 0);
        let full = Subspace::full(f, 3);
        assert_eq!(l.subalgebra_generated(&full).dim(), 3);
        let ef = Subspace::from_rows(
            f,
            3,
            vec![crate::linalg::unit_vec(f, 3, 0), crate::linalg::unit_vec(f, 3, 2)],
        );
        let gen = l.subalgebra_generated(&ef);
        assert_eq!(gen.dim(), 3);
        let again = l.subalgebra_generated(&gen);
        assert!(again.equal(&gen).unwrap());
        assert!(gen.contains(&ef).unwrap());
    }

    #[test]
    fn degree_additivity_of_constants() {
        let f = Field::Q;
        let l = sl2(f);
        for ((i, j), terms) in l.stored_brackets() {
            let want = (l.degrees[*i].0 + l.degrees[*j].0, 0);
            for (k, _) in terms {
                assert_eq!(l.degrees[*k], want);
            }
        }
    }
}
