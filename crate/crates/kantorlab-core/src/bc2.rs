//! The BC2 root system in the base `{a1, a2}` (a1 short, a2 long), its Weyl
//! group of order 8, images of BC2-graded Lie algebras under the group, and
//! Weyl images of short-Peirce-graded pairs, including the reflection given
//! directly by its six-term product formula.
//!
//! All degrees are written in base coordinates: `(k1, k2) = k1*a1 + k2*a2`.
//! The orthonormal-basis picture `<l1, l2> = l1*e1 + l2*e2` is related by
//! `(k1, k2) = <k1 - k2, k2>` and is provided for display only.

use crate::field::Scalar;
use crate::kantor::{kantor_construct_impl, pair_on_components, KantorAlgebra};
use crate::lie::{Degree, GradedLieAlgebra};
use crate::pairs::{Sign, TrilinearPair};
use crate::{Error, Result};
use std::collections::BTreeSet;

/// An element of the Weyl group as an integer matrix on base coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub name: &'static str,
    /// Row-major 2x2 matrix acting on column vectors `(k1, k2)`.
    pub matrix: [[i64; 2]; 2],
}

impl WeylElement {
    pub fn apply(&self, d: Degree) -> Degree {
        (
            self.matrix[0][0] * d.0 + self.matrix[0][1] * d.1,
            self.matrix[1][0] * d.0 + self.matrix[1][1] * d.1,
        )
    }

    pub fn compose(&self, rhs: &WeylElement) -> [[i64; 2]; 2] {
        let a = &self.matrix;
        let b = &rhs.matrix;
        [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ]
    }
}

pub const WEYL_NAMES: [&str; 8] = ["1", "s1", "s2", "s2s1", "-1", "-s1", "-s2", "-s2s1"];

/// The eight elements in the order `1, s1, s2, s2s1, -1, -s1, -s2, -s2s1`,
/// together with the multiplication table `table[i][j] = index of w_i w_j`.
pub fn weyl_group() -> (Vec<WeylElement>, [[usize; 8]; 8]) {
    let e = [[1, 0], [0, 1]];
    let s1 = [[-1, 2], [0, 1]];
    let s2 = [[1, 0], [1, -1]];
    let neg = |m: [[i64; 2]; 2]| [[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]];
    let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
        [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ]
    };
    let s2s1 = mul(s2, s1);
    let mats = [e, s1, s2, s2s1, neg(e), neg(s1), neg(s2), neg(s2s1)];
    let elements: Vec<WeylElement> = WEYL_NAMES
        .iter()
        .zip(mats.iter())
        .map(|(name, m)| WeylElement { name, matrix: *m })
        .collect();
    let mut table = [[usize::MAX; 8]; 8];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let prod = mul(a.matrix, b.matrix);
            table[i][j] = mats
                .iter()
                .position(|m| *m == prod)
                .expect("the eight matrices are closed under multiplication");
        }
    }
    (elements, table)
}

pub fn weyl_by_name(name: &str) -> Result<WeylElement> {
    let (els, _) = weyl_group();
    els.into_iter()
        .find(|w| w.name == name)
        .ok_or_else(|| Error::Parse(format!("unknown Weyl element {name:?}")))
}

/// The twelve roots of BC2 in base coordinates.
pub fn delta_bc2() -> Vec<Degree> {
    let pos = [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (2, 2)];
    let mut all = Vec::with_capacity(12);
    for p in pos {
        all.push(p);
        all.push((-p.0, -p.1));
    }
    all
}

/// `Delta` together with 0: the allowed support of a BC2-graded algebra.
pub fn bc2_support() -> BTreeSet<Degree> {
    let mut s: BTreeSet<Degree> = delta_bc2().into_iter().collect();
    s.insert((0, 0));
    s
}

/// Base-to-orthonormal display coordinates: `(k1, k2) -> <k1 - k2, k2>`.
pub fn gamma_to_eps(d: Degree) -> (i64, i64) {
    (d.0 - d.1, d.1)
}

/// The theta-image: same structure constants, each degree d replaced by
/// theta(d). Requires a valid BC2 grading.
pub fn theta_image(l: &GradedLieAlgebra, theta: &WeylElement) -> Result<GradedLieAlgebra> {
    let rep = l.grading_check(&bc2_support());
    if !rep.ok {
        return Err(Error::Grading(format!(
            "theta_image input is not BC2-graded: bad degrees {:?}, bad brackets {:?}",
            rep.bad_degrees, rep.bad_brackets
        )));
    }
    let mut out = l.clone();
    for d in out.degrees.iter_mut() {
        *d = theta.apply(*d);
    }
    Ok(out)
}

/// Basis indices of the enveloped pair inside a BC2-graded algebra, in the
/// order used by `sp_pair_from_bc2`: per sign, the label-0 block
/// (degree `(s, 0)`) then the label-1 block (degree `(s, s)`).
pub fn bc2_pair_embedding(l: &GradedLieAlgebra) -> [Vec<usize>; 2] {
    let mut idx: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for sigma in Sign::BOTH {
        let s = sigma.unit();
        for lab in [0i64, 1] {
            idx[sigma.idx()].extend(l.indices_of_degree((s, s * lab)));
        }
    }
    idx
}

/// The SP-graded pair enveloped by a BC2-graded Lie algebra: spaces
/// `P_i^s = L_{s1, si}`, products `[[x, y], z]`, labels from the second
/// degree coordinate. The basis of each side lists the label-0 block first.
pub fn sp_pair_from_bc2(l: &GradedLieAlgebra) -> Result<TrilinearPair> {
    let rep = l.grading_check(&bc2_support());
    if !rep.ok {
        return Err(Error::Grading("sp_pair_from_bc2 needs a BC2-graded algebra".into()));
    }
    let idx = bc2_pair_embedding(l);
    let mut labels: [Vec<i64>; 2] = [Vec::new(), Vec::new()];
    for sigma in Sign::BOTH {
        for &i in &idx[sigma.idx()] {
            labels[sigma.idx()].push(sigma.unit() * l.degrees[i].1);
        }
    }
    let mut p = pair_on_components(l, &idx[0], &idx[1])?;
    p.sp_labels = Some(labels);
    Ok(p)
}

/// The enveloping algebra of an SP-graded pair with its standard BC2-grading:
/// pair blocks sit at degrees `(s, s i)` and the operator block degrees are
/// inferred from the generating D/K blocks.
pub fn standard_bc2_on_kantor(p: &TrilinearPair) -> Result<KantorAlgebra> {
    let k = kantor_construct_impl(p, true)?;
    let rep = k.algebra.grading_check(&bc2_support());
    if !rep.ok {
        return Err(Error::Grading(
            "standard BC2 grading fell outside the root support".into(),
        ));
    }
    Ok(k)
}

/// The Weyl image of an SP-graded Kantor pair, computed through the
/// enveloping algebra route: re-grade the standard construction by `u` and
/// read off the enveloped pair.
pub fn weyl_image(p: &TrilinearPair, u: &WeylElement) -> Result<TrilinearPair> {
    let k = standard_bc2_on_kantor(p)?;
    let imaged = theta_image(&k.algebra, u)?;
    sp_pair_from_bc2(&imaged)
}

/// Label shift `P_i -> P_{1-i}`, with the basis re-sorted into canonical
/// label order (all label-0 first).
pub fn sp_shift(p: &TrilinearPair) -> Result<TrilinearPair> {
    let labels = p
        .sp_labels
        .as_ref()
        .ok_or_else(|| Error::Precondition("sp_shift needs SP labels".into()))?;
    let flipped: [Vec<i64>; 2] = [
        labels[0].iter().map(|l| 1 - l).collect(),
        labels[1].iter().map(|l| 1 - l).collect(),
    ];
    let mut q = p.clone();
    q.sp_labels = Some(flipped);
    Ok(canonicalize_sp(&q))
}

/// The opposite SP-graded pair: `(P^op)_i^s = P_i^{-s}`.
pub fn sp_opposite(p: &TrilinearPair) -> Result<TrilinearPair> {
    if p.sp_labels.is_none() {
        return Err(Error::Precondition("sp_opposite needs SP labels".into()));
    }
    Ok(p.opposite_pair())
}

/// Reorders each side so label-0 vectors come first (stable); tensors are
/// re-indexed accordingly.
pub fn canonicalize_sp(p: &TrilinearPair) -> TrilinearPair {
    let labels = p.sp_labels.as_ref().expect("labels required");
    let perm_of = |side: &[i64]| -> Vec<usize> {
        let mut order: Vec<usize> = (0..side.len()).collect();
        order.sort_by_key(|&i| (side[i], i));
        order // new position -> old index
    };
    let perms = [perm_of(&labels[0]), perm_of(&labels[1])];
    permute_pair_basis(p, &perms)
}

/// Re-indexes the basis of both sides: `perm[side][new] = old`.
pub fn permute_pair_basis(p: &TrilinearPair, perms: &[Vec<usize>; 2]) -> TrilinearPair {
    let inv = |perm: &[usize]| {
        let mut m = vec![0usize; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            m[old] = new;
        }
        m
    };
    let inv_perms = [inv(&perms[0]), inv(&perms[1])];
    let mut q = TrilinearPair::new(p.field, p.dim(Sign::Minus), p.dim(Sign::Plus));
    for sigma in Sign::BOTH {
        let s = &inv_perms[sigma.idx()];
        let n = &inv_perms[sigma.flip().idx()];
        for ((i, j, k), terms) in p.tensor(sigma) {
            let out = terms.iter().map(|(a, c)| (s[*a], c.clone())).collect();
            q.set_basis_product(sigma, s[*i], n[*j], s[*k], out);
        }
    }
    q.sp_labels = p.sp_labels.as_ref().map(|l| {
        [
            perms[0].iter().map(|&old| l[0][old]).collect(),
            perms[1].iter().map(|&old| l[1][old]).collect(),
        ]
    });
    q
}

/// True when each side lists all label-0 vectors before all label-1 vectors.
pub fn is_canonical_sp(p: &TrilinearPair) -> bool {
    match &p.sp_labels {
        None => false,
        Some(labels) => labels
            .iter()
            .all(|side| side.windows(2).all(|w| w[0] <= w[1])),
    }
}

/// The reflection of an SP-graded pair, assembled directly from its six-term
/// product formula. The sigma side of the output is `P_0^{-s} + P_1^s`, with
/// the label-0 block listed first.
pub fn reflection_direct(p: &TrilinearPair) -> Result<TrilinearPair> {
    let labels = p
        .sp_labels
        .as_ref()
        .ok_or_else(|| Error::Precondition("reflection needs SP labels".into()))?;
    let field = p.field;
    // block index maps: label-i positions per original side
    let block = |sigma: Sign, lab: i64| -> Vec<usize> {
        (0..p.dim(sigma))
            .filter(|&t| labels[sigma.idx()][t] == lab)
            .collect()
    };
    // output side sigma: [P_0^{-s} block | P_1^s block]
    let out_blocks = |sigma: Sign| (block(sigma.flip(), 0), block(sigma, 1));
    let (m0, m1) = out_blocks(Sign::Minus);
    let (p0, p1) = out_blocks(Sign::Plus);
    let dims = [(m0.len(), m1.len()), (p0.len(), p1.len())];
    let mut out = TrilinearPair::new(field, m0.len() + m1.len(), p0.len() + p1.len());
    out.sp_labels = Some([
        std::iter::repeat(0)
            .take(m0.len())
            .chain(std::iter::repeat(1).take(m1.len()))
            .collect(),
        std::iter::repeat(0)
            .take(p0.len())
            .chain(std::iter::repeat(1).take(p1.len()))
            .collect(),
    ]);
    let blocks: [(Vec<usize>, Vec<usize>); 2] = [(m0, m1), (p0, p1)];

    // Decode an output index into (block label, original side, original index).
    let decode = |sigma: Sign, t: usize| -> (i64, Sign, usize) {
        let (b0, b1) = &blocks[sigma.idx()];
        if t < b0.len() {
            (0, sigma.flip(), b0[t])
        } else {
            (1, sigma, b1[t - b0.len()])
        }
    };
    // Map a coordinate vector on original side `side` restricted to the
    // label-`lab` block into output sigma-side coordinates.
    let encode = |sigma: Sign, lab: i64, side: Sign, v: &[Scalar]| -> Result<Vec<(usize, Scalar)>> {
        let (b0, b1) = &blocks[sigma.idx()];
        let (blk, off): (&Vec<usize>, usize) =
            if lab == 0 { (b0, 0) } else { (b1, b0.len()) };
        let mut terms = Vec::new();
        let mut seen = vec![false; v.len()];
        for (slot, &orig) in blk.iter().enumerate() {
            if !v[orig].is_zero() {
                terms.push((off + slot, v[orig].clone()));
            }
            seen[orig] = true;
        }
        for (orig, val) in v.iter().enumerate() {
            if !seen[orig] && !val.is_zero() && labels[side.idx()][orig] != lab {
                return Err(Error::Grading(
                    "reflection product left its short-Peirce block".into(),
                ));
            }
        }
        let _ = dims;
        Ok(terms)
    };

    for sigma in Sign::BOTH {
        let ds = out.dim(sigma);
        let dn = out.dim(sigma.flip());
        for ai in 0..ds {
            let (la, sa, ia) = decode(sigma, ai);
            let ua = crate::linalg::unit_vec(field, p.dim(sa), ia);
            for bi in 0..dn {
                let (lb, sb, ib) = decode(sigma.flip(), bi);
                let ub = crate::linalg::unit_vec(field, p.dim(sb), ib);
                for ci in 0..ds {
                    let (lc, sc, ic) = decode(sigma, ci);
                    let uc = crate::linalg::unit_vec(field, p.dim(sc), ic);
                    // the six-term case split on (label a, label b, label c)
                    let result: Option<(Sign, i64, Vec<Scalar>, bool)> = match (la, lb, lc) {
                        (0, 0, 0) => {
                            // {a0^-s, b0^s, c0^-s} in P^-s
                            Some((sa, 0, p.triple_product(sa, &ua, &ub, &uc)?, false))
                        }
                        (1, 1, 0) => {
                            // -{b1^-s, a1^s, c0^-s}
                            Some((sb, 0, p.triple_product(sb, &ub, &ua, &uc)?, true))
                        }
                        (0, 1, 1) => {
                            // K(a0^-s, b1^-s) c1^s
                            let k = p.k_operator(sa, &ua, &ub)?;
                            Some((sa, 0, k.mat_vec(&uc), false))
                        }
                        (1, 1, 1) => {
                            // {a1^s, b1^-s, c1^s}
                            Some((sa, 1, p.triple_product(sa, &ua, &ub, &uc)?, false))
                        }
                        (0, 0, 1) => {
                            // -{b0^s, a0^-s, c1^s}
                            Some((sb, 1, p.triple_product(sb, &ub, &ua, &uc)?, true))
                        }
                        (1, 0, 0) => {
                            // K(a1^s, b0^s) c0^-s
                            let k = p.k_operator(sa, &ua, &ub)?;
                            Some((sa, 1, k.mat_vec(&uc), false))
                        }
                        _ => None,
                    };
                    if let Some((res_side, res_lab, vec, negate)) = result {
                        let mut terms = encode(sigma, res_lab, res_side, &vec)?;
                        if negate {
                            for (_, c) in terms.iter_mut() {
                                *c = c.neg();
                            }
                        }
                        out.set_basis_product(sigma, ai, bi, ci, terms);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Tensor-and-label equality of SP-graded pairs on the same index sets.
pub fn sp_tensor_equal(a: &TrilinearPair, b: &TrilinearPair) -> bool {
    a.dims() == b.dims()
        && a.sp_labels == b.sp_labels
        && Sign::BOTH.iter().all(|&s| a.tensor(s) == b.tensor(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_group_relations() {
        let (els, table) = weyl_group();
        assert_eq!(els.len(), 8);
        let idx = |n: &str| els.iter().position(|w| w.name == n).unwrap();
        // s1^2 = s2^2 = 1
        assert_eq!(table[idx("s1")][idx("s1")], idx("1"));
        assert_eq!(table[idx("s2")][idx("s2")], idx("1"));
        // s1 s2 s1 s2 = s2 s1 s2 s1 = -1
        let mut w = idx("1");
        for n in ["s1", "s2", "s1", "s2"] {
            w = table[w][idx(n)];
        }
        assert_eq!(w, idx("-1"));
        let mut w = idx("1");
        for n in ["s2", "s1", "s2", "s1"] {
            w = table[w][idx(n)];
        }
        assert_eq!(w, idx("-1"));
        // identity and inverses
        for i in 0..8 {
            assert_eq!(table[0][i], i);
            assert_eq!(table[i][0], i);
            assert!((0..8).any(|j| table[i][j] == 0));
        }
    }

    #[test]
    fn weyl_elements_permute_delta() {
        let (els, _) = weyl_group();
        let delta: BTreeSet<Degree> = delta_bc2().into_iter().collect();
        assert_eq!(delta.len(), 12);
        for w in &els {
            let image: BTreeSet<Degree> = delta.iter().map(|&d| w.apply(d)).collect();
            assert_eq!(image, delta, "{} does not permute Delta", w.name);
        }
    }

    #[test]
    fn s1_action_on_roots() {
        let s1 = weyl_by_name("s1").unwrap();
        // s1(a1) = -a1 and s1(a1 + a2) = a1 + a2
        assert_eq!(s1.apply((1, 0)), (-1, 0));
        assert_eq!(s1.apply((1, 1)), (1, 1));
        let s2 = weyl_by_name("s2").unwrap();
        // s2 exchanges a1 and a1 + a2
        assert_eq!(s2.apply((1, 0)), (1, 1));
        assert_eq!(s2.apply((1, 1)), (1, 0));
        assert_eq!(s2.apply((0, 1)), (0, -1));
    }

    #[test]
    fn eps_coordinates() {
        // a1 = e1, a2 = -e1 + e2
        assert_eq!(gamma_to_eps((1, 0)), (1, 0));
        assert_eq!(gamma_to_eps((0, 1)), (-1, 1));
        assert_eq!(gamma_to_eps((2, 1)), (1, 1));
    }

    #[test]
    fn canonicalization_sorts_labels() {
        use crate::field::Field;
        let f = Field::Q;
        let mut p = TrilinearPair::new(f, 2, 2);
        p.set_basis_product(Sign::Plus, 0, 0, 1, vec![(1, f.one())]);
        p.sp_labels = Some([vec![1, 0], vec![1, 0]]);
        assert!(!is_canonical_sp(&p));
        let q = canonicalize_sp(&p);
        assert!(is_canonical_sp(&q));
        assert_eq!(q.sp_labels, Some([vec![0, 1], vec![0, 1]]));
        // the tensor entry moved with the permutation: old (0,0,1) -> new (1,1,0)
        assert_eq!(q.basis_product(Sign::Plus, 1, 1, 0)[0], f.one());
        // canonicalizing twice is stable
        assert!(sp_tensor_equal(&q, &canonicalize_sp(&q)));
    }

    #[test]
    fn shift_is_involution_on_trivially_graded() {
        use crate::field::Field;
        let f = Field::Q;
        let mut p = crate::pairs::one_dim_jordan(f);
        p.sp_labels = Some([vec![0], vec![0]]);
        let shifted = sp_shift(&p).unwrap();
        assert_eq!(shifted.sp_labels, Some([vec![1], vec![1]]));
        let back = sp_shift(&shifted).unwrap();
        assert!(sp_tensor_equal(&p, &back));
        let opp = sp_opposite(&p).unwrap();
        assert!(sp_tensor_equal(&p, &sp_opposite(&opp).unwrap()));
    }

    #[test]
    fn one_sp_grading_reflects_to_itself() {
        use crate::field::Field;
        let f = Field::Q;
        // one SP-grading: P = P_1
        let mut p = crate::pairs::one_dim_jordan(f);
        p.sp_labels = Some([vec![1], vec![1]]);
        let refl = reflection_direct(&p).unwrap();
        assert!(sp_tensor_equal(&p, &refl));
        // zero SP-grading: reflection is the opposite
        let mut q = crate::pairs::one_dim_jordan(f);
        q.sp_labels = Some([vec![0], vec![0]]);
        let refl = reflection_direct(&q).unwrap();
        assert!(sp_tensor_equal(&q.opposite_pair(), &refl));
    }

    #[test]
    fn empty_pair_rows_give_zero_pair() {
        use crate::field::Field;
        use crate::lie::{GradedLieAlgebra, GradingKind};
        let f = Field::Q;
        let l = GradedLieAlgebra::new(f, vec![(0, 0); 3], GradingKind::Z2);
        let p = sp_pair_from_bc2(&l).unwrap();
        assert_eq!(p.dims(), (0, 0));
    }

    #[test]
    fn one_sp_grading_support() {
        use crate::field::Field;
        // with P = P_1 the support sits in {(+-1, +-1), (+-2, +-2), (0, 0)}
        let f = Field::Q;
        let mut p = crate::pairs::one_dim_jordan(f);
        p.sp_labels = Some([vec![1], vec![1]]);
        let k = standard_bc2_on_kantor(&p).unwrap();
        for d in &k.algebra.degrees {
            assert!(
                matches!(d, (1, 1) | (-1, -1) | (2, 2) | (-2, -2) | (0, 0) | (2, 1) | (-2, -1)),
                "unexpected degree {d:?}"
            );
        }
    }

    #[test]
    fn weyl_image_identity_and_opposite() {
        use crate::field::Field;
        let f = Field::Q;
        let mut p = crate::pairs::one_dim_jordan(f);
        p.sp_labels = Some([vec![1], vec![1]]);
        let id = weyl_by_name("1").unwrap();
        assert!(sp_tensor_equal(&p, &weyl_image(&p, &id).unwrap()));
        let neg = weyl_by_name("-1").unwrap();
        assert!(sp_tensor_equal(
            &sp_opposite(&p).unwrap(),
            &weyl_image(&p, &neg).unwrap()
        ));
        let s2 = weyl_by_name("s2").unwrap();
        assert!(sp_tensor_equal(
            &sp_shift(&p).unwrap(),
            &weyl_image(&p, &s2).unwrap()
        ));
        let s1 = weyl_by_name("s1").unwrap();
        assert!(sp_tensor_equal(
            &reflection_direct(&p).unwrap(),
            &weyl_image(&p, &s1).unwrap()
        ));
    }
}
