//! Exterior-algebra construction of a 78-dimensional Lie algebra of type E6
//! over any field here supported, together with the pairs living on the
//! degree-3 exterior powers and their short-Peirce data.
//!
//! Elements of the exterior algebras are stored on the bases `v_S^+` (indices
//! ascending) and `v_S^-` (indices descending); with dual bases these satisfy
//! `v_S^- . v_T^+ = delta_{S,T}`. All three actions (wedge, the inner `.`
//! action, the derivation `o` action) route their sign bookkeeping through
//! the reversal parity `tau` below, which is the single point where the two
//! storage conventions meet.

use crate::field::{Field, Scalar};
use crate::lie::{Degree, GradedLieAlgebra, GradingKind};
use crate::linalg::Matrix;
use crate::pairs::{Sign, TrilinearPair};
use crate::skew::FormSpace;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Subsets of {1..6} as bitmasks (bit 0 = index 1).
pub type Mask = u8;

pub const FULL_MASK: Mask = 0x3f;

fn popcount(m: Mask) -> u32 {
    m.count_ones()
}

/// Parity of reversing `l` letters: `(-1)^(l(l-1)/2)`.
fn tau(l: u32) -> i64 {
    if (l * l.wrapping_sub(1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn side_factor(sigma: Sign, l: u32) -> i64 {
    match sigma {
        Sign::Plus => 1,
        Sign::Minus => tau(l),
    }
}

/// Shuffle sign of the ascending merge `asc(S) asc(T)`; `None` on overlap.
fn merge_sign(s: Mask, t: Mask) -> Option<i64> {
    if s & t != 0 {
        return None;
    }
    let mut inversions = 0u32;
    for j in 0..6 {
        if t & (1 << j) != 0 {
            inversions += (s >> (j + 1)).count_ones();
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Position sign for removing index bit `j` from ascending `s`:
/// `(-1)^(pos-1)` with 1-based position.
fn removal_sign(s: Mask, j: u8) -> i64 {
    let below = (s & ((1u8 << j) - 1)).count_ones();
    if below % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Masks of a given popcount, ascending numerically.
pub fn masks_of_size(k: u32) -> Vec<Mask> {
    (0u8..=FULL_MASK).filter(|m| popcount(*m) == k).collect()
}

/// An element of one of the exterior algebras.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtElement {
    pub sign: Sign,
    pub terms: BTreeMap<Mask, Scalar>,
}

impl ExtElement {
    pub fn zero(sign: Sign) -> ExtElement {
        ExtElement { sign, terms: BTreeMap::new() }
    }

    pub fn basis(sign: Sign, mask: Mask, field: Field) -> ExtElement {
        let mut e = ExtElement::zero(sign);
        e.terms.insert(mask, field.one());
        e
    }

    pub fn add_term(&mut self, mask: Mask, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let nv = e.get().add(&c);
                if nv.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = nv;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn scaled(&self, c: &Scalar) -> ExtElement {
        let mut out = ExtElement::zero(self.sign);
        for (m, v) in &self.terms {
            out.add_term(*m, v.mul(c));
        }
        out
    }

    pub fn add_assign(&mut self, rhs: &ExtElement) {
        assert_eq!(self.sign, rhs.sign);
        for (m, v) in &rhs.terms {
            self.add_term(*m, v.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Uniform degree of the element, if homogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut deg = None;
        for m in self.terms.keys() {
            match deg {
                None => deg = Some(popcount(*m)),
                Some(d) if d == popcount(*m) => {}
                _ => return None,
            }
        }
        deg
    }
}

/// The wedge product in the stored conventions.
pub fn ext_product(field: Field, x: &ExtElement, y: &ExtElement) -> Result<ExtElement> {
    if x.sign != y.sign {
        return Err(Error::Shape("ext_product needs operands of the same sign".into()));
    }
    let mut out = ExtElement::zero(x.sign);
    for (s, a) in &x.terms {
        for (t, b) in &y.terms {
            if let Some(ms) = merge_sign(*s, *t) {
                let f = side_factor(x.sign, popcount(*s))
                    * side_factor(x.sign, popcount(*t))
                    * side_factor(x.sign, popcount(*s | *t))
                    * ms;
                out.add_term(*s | *t, field.from_i64(f).mul(a).mul(b));
            }
        }
    }
    Ok(out)
}

/// The inner action `a . x` of `/\(M^{-s})` on `/\(M^s)`, extended from
/// `v . w = g(v, w)` multiplicatively.
pub fn inner_action(fs: &FormSpace, a: &ExtElement, x: &ExtElement) -> Result<ExtElement> {
    if a.sign == x.sign {
        return Err(Error::Shape("inner_action needs opposite signs".into()));
    }
    let field = fs.field;
    let mut out = ExtElement::zero(x.sign);
    for (t, ca) in &a.terms {
        for (s, cx) in &x.terms {
            let lt = popcount(*t);
            let ls = popcount(*s);
            if lt > ls {
                continue;
            }
            // ascending-convention insertion, largest removed index first
            let mut acc: Vec<(Mask, Scalar)> = vec![(*s, field.one())];
            for j in (0..6u8).rev() {
                if *t & (1 << j) == 0 {
                    continue;
                }
                let mut next: Vec<(Mask, Scalar)> = Vec::new();
                for (m, c) in &acc {
                    for i in 0..6u8 {
                        if m & (1 << i) == 0 {
                            continue;
                        }
                        let gval = g_entry(fs, a.sign, j, i);
                        if gval.is_zero() {
                            continue;
                        }
                        let sgn = removal_sign(*m, i);
                        let coeff = c.mul(&gval).mul(&field.from_i64(sgn));
                        if coeff.is_zero() {
                            continue;
                        }
                        push_term(&mut next, m & !(1 << i), coeff);
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            let f = side_factor(a.sign, lt)
                * side_factor(x.sign, ls)
                * side_factor(x.sign, ls - lt);
            let scale = field.from_i64(f).mul(ca).mul(cx);
            for (m, c) in acc {
                out.add_term(m, c.mul(&scale));
            }
        }
    }
    Ok(out)
}

fn push_term(v: &mut Vec<(Mask, Scalar)>, m: Mask, c: Scalar) {
    for (mm, cc) in v.iter_mut() {
        if *mm == m {
            *cc = cc.add(&c);
            return;
        }
    }
    v.push((m, c));
}

/// `g(v_j^{a_side}, v_i^{x_side})` for the degree-1 inner action.
fn g_entry(fs: &FormSpace, a_side: Sign, j: u8, i: u8) -> Scalar {
    match a_side {
        Sign::Minus => fs.g.get(j as usize, i as usize).clone(),
        Sign::Plus => fs.g.get(i as usize, j as usize).clone(),
    }
}

/// Scalar value of `x . a` for equal degrees (`x . a = a . x`).
pub fn inner_scalar(fs: &FormSpace, a: &ExtElement, x: &ExtElement) -> Result<Scalar> {
    let v = inner_action(fs, a, x)?;
    Ok(v.terms.get(&0).cloned().unwrap_or_else(|| fs.field.zero()))
}

/// An element `iota^+(A^+) + c h_0` of the extended operator algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct STildeElement {
    /// The `End(M^+)` component; the `End(M^-)` component is `-(A^+)^*`.
    pub a_plus: Matrix,
    pub h0_coeff: Scalar,
}

impl STildeElement {
    pub fn zero(field: Field) -> STildeElement {
        STildeElement { a_plus: Matrix::zero(field, 6, 6), h0_coeff: field.zero() }
    }

    pub fn iota_plus(a: Matrix) -> STildeElement {
        let field = a.field;
        STildeElement { a_plus: a, h0_coeff: field.zero() }
    }

    pub fn h0(field: Field) -> STildeElement {
        STildeElement { a_plus: Matrix::zero(field, 6, 6), h0_coeff: field.one() }
    }

    pub fn h_m(field: Field) -> STildeElement {
        STildeElement::iota_plus(Matrix::identity(field, 6))
    }

    pub fn add(&self, rhs: &STildeElement) -> STildeElement {
        STildeElement {
            a_plus: self.a_plus.add(&rhs.a_plus),
            h0_coeff: self.h0_coeff.add(&rhs.h0_coeff),
        }
    }

    pub fn scaled(&self, c: &Scalar) -> STildeElement {
        STildeElement { a_plus: self.a_plus.scale(c), h0_coeff: self.h0_coeff.mul(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.a_plus.is_zero() && self.h0_coeff.is_zero()
    }

    /// `lambda((A^-, A^+) + a h_0) = tr(A^+) + 3a`.
    pub fn lambda(&self) -> Scalar {
        let field = self.a_plus.field;
        self.a_plus.trace().add(&field.from_i64(3).mul(&self.h0_coeff))
    }
}

/// Adjoint of an endomorphism of `M^+` with respect to `g`.
fn adjoint_plus(fs: &FormSpace, a: &Matrix) -> Matrix {
    // (A^+)^* = (G A G^-1)^T; with G = I this is the transpose
    let g = &fs.g;
    let g_inv = invert(g);
    g.mat_mul(a).mat_mul(&g_inv).transpose()
}

fn invert(m: &Matrix) -> Matrix {
    let field = m.field;
    let n = m.rows;
    let solver = crate::linalg::LinearSolver::new(m.clone());
    let mut inv = Matrix::zero(field, n, n);
    for j in 0..n {
        let col = solver
            .solve(&crate::linalg::unit_vec(field, n, j))
            .expect("form matrix is invertible");
        for i in 0..n {
            inv.set(i, j, col[i].clone());
        }
    }
    inv
}

/// The matrix component acting on the given side.
fn side_matrix(fs: &FormSpace, s: &STildeElement, sigma: Sign) -> Matrix {
    match sigma {
        Sign::Plus => s.a_plus.clone(),
        Sign::Minus => adjoint_plus(fs, &s.a_plus).scale(&fs.field.from_i64(-1)),
    }
}

/// The `o` action of the extended operator algebra: the derivation extension
/// of the matrix part plus `h_0 o p = s k p` on `/\_{3k}`.
pub fn circ_action(fs: &FormSpace, s: &STildeElement, x: &ExtElement) -> Result<ExtElement> {
    let field = fs.field;
    let a = side_matrix(fs, s, x.sign);
    let mut out = ExtElement::zero(x.sign);
    for (m, c) in &x.terms {
        // derivation: replace one index at a time
        for pos in 0..6u8 {
            if m & (1 << pos) == 0 {
                continue;
            }
            for rep in 0..6u8 {
                let aval = a.get(rep as usize, pos as usize);
                if aval.is_zero() {
                    continue;
                }
                if rep == pos {
                    out.add_term(*m, c.mul(aval));
                    continue;
                }
                if m & (1 << rep) != 0 {
                    continue;
                }
                // move: remove pos, insert rep, tracking both position signs
                let without = m & !(1 << pos);
                let sgn = removal_sign(*m, pos) * removal_sign(without | (1 << rep), rep);
                out.add_term(
                    without | (1 << rep),
                    c.mul(aval).mul(&field.from_i64(sgn)),
                );
            }
        }
        // h_0 part
        if !s.h0_coeff.is_zero() {
            let l = popcount(*m);
            if l % 3 != 0 {
                return Err(Error::Precondition(
                    "h_0 acts only on exterior degrees divisible by 3".into(),
                ));
            }
            let k = (l / 3) as i64 * x.sign.unit();
            out.add_term(*m, c.mul(&s.h0_coeff).mul(&field.from_i64(k)));
        }
    }
    Ok(out)
}

/// `E^s(x, a) v = (v . a) . x` for degree-3 arguments, as a 6x6 matrix.
pub fn e_operator(fs: &FormSpace, x: &ExtElement, a: &ExtElement) -> Result<Matrix> {
    if x.sign == a.sign || x.degree() != Some(3) || a.degree() != Some(3) {
        return Err(Error::Shape("e_operator needs degree-3 arguments of opposite signs".into()));
    }
    let field = fs.field;
    let mut out = Matrix::zero(field, 6, 6);
    for i in 0..6u8 {
        let vi = ExtElement::basis(x.sign, 1 << i, field);
        let va = inner_action(fs, &vi, a)?;
        let col = inner_action(fs, &va, x)?;
        for (m, c) in &col.terms {
            debug_assert_eq!(popcount(*m), 1);
            let r = m.trailing_zeros() as usize;
            out.set(r, i as usize, c.clone());
        }
    }
    Ok(out)
}

/// Name of a basis vector of the constructed algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisName {
    /// `v_S^s`, `|S| = 3`.
    VS(Sign, Mask),
    /// `v_{[1,6]}^s`.
    VFull(Sign),
    /// `iota^+(E_ij)` (0-based indices).
    Eij(usize, usize),
    /// `h_0` (only in the 79-dimensional algebra).
    H0,
    /// `h_i`, `1 <= i <= 6` (only in the 78-dimensional algebra).
    H(usize),
}

impl BasisName {
    pub fn label(&self) -> String {
        match self {
            BasisName::VS(s, m) => {
                let idx: String = (0..6u8)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| char::from(b'1' + i))
                    .collect();
                format!("v{}{}", idx, s.symbol())
            }
            BasisName::VFull(s) => format!("v123456{}", s.symbol()),
            BasisName::Eij(i, j) => format!("E{}{}", i + 1, j + 1),
            BasisName::H0 => "h0".into(),
            BasisName::H(i) => format!("h{i}"),
        }
    }
}

/// The constructed algebra with its named basis and building context.
pub struct E6Algebra {
    pub algebra: GradedLieAlgebra,
    pub names: Vec<BasisName>,
    pub fs: FormSpace,
}

impl E6Algebra {
    pub fn index_of(&self, name: BasisName) -> Option<usize> {
        self.names.iter().position(|n| *n == name)
    }

    /// Indices of `h_1..h_6` (the Cartan block of the 78-dim algebra).
    pub fn h_indices(&self) -> Vec<usize> {
        (1..=6)
            .map(|i| self.index_of(BasisName::H(i)).expect("h basis present"))
            .collect()
    }
}

/// A value in the 79-dimensional algebra: two exterior halves and an operator
/// part.
#[derive(Debug, Clone)]
struct ETValue {
    ext: [ExtElement; 2],
    s: STildeElement,
}

impl ETValue {
    fn zero(field: Field) -> ETValue {
        ETValue {
            ext: [ExtElement::zero(Sign::Minus), ExtElement::zero(Sign::Plus)],
            s: STildeElement::zero(field),
        }
    }
}

#[derive(Debug, Clone)]
enum ETElem {
    Ext(Sign, Mask),
    Eij(usize, usize),
    H0,
    /// An arbitrary operator-part element (used for the 78-dim basis).
    S(STildeElement),
}

fn bracket_elems(fs: &FormSpace, a: &ETElem, b: &ETElem) -> Result<ETValue> {
    let field = fs.field;
    let mut out = ETValue::zero(field);
    let as_s = |e: &ETElem| -> Option<STildeElement> {
        match e {
            ETElem::Eij(i, j) => {
                let mut m = Matrix::zero(field, 6, 6);
                m.set(*i, *j, field.one());
                Some(STildeElement::iota_plus(m))
            }
            ETElem::H0 => Some(STildeElement::h0(field)),
            ETElem::S(s) => Some(s.clone()),
            ETElem::Ext(..) => None,
        }
    };
    match (as_s(a), as_s(b)) {
        (Some(sa), Some(sb)) => {
            // [iota(A) + a h0, iota(B) + b h0] = iota([A, B])
            let ab = sa.a_plus.mat_mul(&sb.a_plus);
            let ba = sb.a_plus.mat_mul(&sa.a_plus);
            out.s = STildeElement::iota_plus(ab.sub(&ba));
        }
        (Some(sa), None) => {
            let ETElem::Ext(sigma, m) = b else { unreachable!() };
            let x = ExtElement::basis(*sigma, *m, field);
            out.ext[sigma.idx()] = circ_action(fs, &sa, &x)?;
        }
        (None, Some(sb)) => {
            let ETElem::Ext(sigma, m) = a else { unreachable!() };
            let x = ExtElement::basis(*sigma, *m, field);
            let act = circ_action(fs, &sb, &x)?;
            out.ext[sigma.idx()] = act.scaled(&field.from_i64(-1));
        }
        (None, None) => {
            let (ETElem::Ext(sa, ma), ETElem::Ext(sb, mb)) = (a, b) else { unreachable!() };
            let xa = ExtElement::basis(*sa, *ma, field);
            let xb = ExtElement::basis(*sb, *mb, field);
            let (ka, kb) = (popcount(*ma) / 3, popcount(*mb) / 3);
            let (da, db) = (sa.unit() * ka as i64, sb.unit() * kb as i64);
            match (da, db) {
                // same-degree wedge
                (x, y) if x == -1 && y == -1 || x == 1 && y == 1 => {
                    out.ext[sa.idx()] = ext_product(field, &xa, &xb)?;
                }
                // [p_-1, q_1] = E(p,q) + (p.q) h0; E(p_-1, q_1) = iota^+(-E^+(q, p))
                (-1, 1) => {
                    let e = e_operator(fs, &xb, &xa)?;
                    let dot = inner_scalar(fs, &xa, &xb)?;
                    out.s = STildeElement {
                        a_plus: e.scale(&field.from_i64(-1)),
                        h0_coeff: dot,
                    };
                }
                (1, -1) => {
                    let e = e_operator(fs, &xa, &xb)?;
                    let dot = inner_scalar(fs, &xb, &xa)?;
                    out.s = STildeElement { a_plus: e, h0_coeff: dot.neg() };
                }
                // [p_i, q_{-2i}] = p_i . q_{-2i}
                (1, -2) | (-1, 2) => {
                    out.ext[sb.idx()] = inner_action(fs, &xa, &xb)?;
                }
                (2, -1) | (-2, 1) => {
                    let v = inner_action(fs, &xb, &xa)?;
                    out.ext[sa.idx()] = v.scaled(&field.from_i64(-1));
                }
                // [p_-2, q_2] = -(p.q)(h_M - 2 h0)
                (-2, 2) => {
                    let dot = inner_scalar(fs, &xa, &xb)?;
                    out.s = STildeElement {
                        a_plus: Matrix::identity(field, 6).scale(&dot.neg()),
                        h0_coeff: field.from_i64(2).mul(&dot),
                    };
                }
                (2, -2) => {
                    let dot = inner_scalar(fs, &xb, &xa)?;
                    out.s = STildeElement {
                        a_plus: Matrix::identity(field, 6).scale(&dot),
                        h0_coeff: field.from_i64(-2).mul(&dot),
                    };
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

/// The 79-dimensional 5-graded algebra on
/// `/\6(M^-), /\3(M^-), S~, /\3(M^+), /\6(M^+)`.
pub fn build_e_tilde(fs: &FormSpace) -> Result<GradedLieAlgebra> {
    check_rank6(fs)?;
    let field = fs.field;
    let (elems, degrees, _names) = e_tilde_basis(field);
    let mut l = GradedLieAlgebra::new(field, degrees, GradingKind::Z);
    let coords = |v: &ETValue| -> Vec<(usize, Scalar)> { et_coords(v) };
    for i in 0..elems.len() {
        for j in (i + 1)..elems.len() {
            let val = bracket_elems(fs, &elems[i], &elems[j])?;
            l.set_bracket(i, j, coords(&val));
        }
    }
    Ok(l)
}

fn check_rank6(fs: &FormSpace) -> Result<()> {
    if fs.n != 6 {
        return Err(Error::Shape("the construction needs rank 6".into()));
    }
    Ok(())
}

/// Basis layout of the 79-dim algebra; coordinates match `et_coords`.
fn e_tilde_basis(field: Field) -> (Vec<ETElem>, Vec<Degree>, Vec<BasisName>) {
    let _ = field;
    let mut elems = Vec::new();
    let mut degrees = Vec::new();
    let mut names = Vec::new();
    elems.push(ETElem::Ext(Sign::Minus, FULL_MASK));
    degrees.push((-2, 0));
    names.push(BasisName::VFull(Sign::Minus));
    for m in masks_of_size(3) {
        elems.push(ETElem::Ext(Sign::Minus, m));
        degrees.push((-1, 0));
        names.push(BasisName::VS(Sign::Minus, m));
    }
    for i in 0..6 {
        for j in 0..6 {
            elems.push(ETElem::Eij(i, j));
            degrees.push((0, 0));
            names.push(BasisName::Eij(i, j));
        }
    }
    elems.push(ETElem::H0);
    degrees.push((0, 0));
    names.push(BasisName::H0);
    for m in masks_of_size(3) {
        elems.push(ETElem::Ext(Sign::Plus, m));
        degrees.push((1, 0));
        names.push(BasisName::VS(Sign::Plus, m));
    }
    elems.push(ETElem::Ext(Sign::Plus, FULL_MASK));
    degrees.push((2, 0));
    names.push(BasisName::VFull(Sign::Plus));
    (elems, degrees, names)
}

/// Coordinates of an `ETValue` in the 79-dim layout.
fn et_coords(v: &ETValue) -> Vec<(usize, Scalar)> {
    let mut out = Vec::new();
    let m3 = masks_of_size(3);
    let pos3 = |m: Mask| m3.iter().position(|x| *x == m).expect("degree-3 mask");
    for (m, c) in &v.ext[0].terms {
        if *m == FULL_MASK {
            out.push((0, c.clone()));
        } else {
            out.push((1 + pos3(*m), c.clone()));
        }
    }
    for i in 0..6 {
        for j in 0..6 {
            let c = v.s.a_plus.get(i, j);
            if !c.is_zero() {
                out.push((21 + i * 6 + j, c.clone()));
            }
        }
    }
    if !v.s.h0_coeff.is_zero() {
        out.push((57, v.s.h0_coeff.clone()));
    }
    for (m, c) in &v.ext[1].terms {
        if *m == FULL_MASK {
            out.push((78, c.clone()));
        } else {
            out.push((58 + pos3(*m), c.clone()));
        }
    }
    out.sort_by_key(|(i, _)| *i);
    out
}

/// The 78-dimensional subalgebra: the kernel of `lambda` in degree 0.
pub fn build_e(fs: &FormSpace) -> Result<E6Algebra> {
    check_rank6(fs)?;
    let field = fs.field;
    let mut elems: Vec<ETElem> = Vec::new();
    let mut degrees: Vec<Degree> = Vec::new();
    let mut names: Vec<BasisName> = Vec::new();
    elems.push(ETElem::Ext(Sign::Minus, FULL_MASK));
    degrees.push((-2, 0));
    names.push(BasisName::VFull(Sign::Minus));
    for m in masks_of_size(3) {
        elems.push(ETElem::Ext(Sign::Minus, m));
        degrees.push((-1, 0));
        names.push(BasisName::VS(Sign::Minus, m));
    }
    // h_1..h_5 = iota(E_ii - E_{i+1,i+1}), h_6 = iota(E_44+E_55+E_66) - h_0
    for i in 0..5 {
        let mut m = Matrix::zero(field, 6, 6);
        m.set(i, i, field.one());
        m.set(i + 1, i + 1, field.from_i64(-1));
        elems.push(ETElem::S(STildeElement::iota_plus(m)));
        degrees.push((0, 0));
        names.push(BasisName::H(i + 1));
    }
    {
        let mut m = Matrix::zero(field, 6, 6);
        for i in 3..6 {
            m.set(i, i, field.one());
        }
        elems.push(ETElem::S(STildeElement {
            a_plus: m,
            h0_coeff: field.from_i64(-1),
        }));
        degrees.push((0, 0));
        names.push(BasisName::H(6));
    }
    for i in 0..6 {
        for j in 0..6 {
            if i == j {
                continue;
            }
            elems.push(ETElem::Eij(i, j));
            degrees.push((0, 0));
            names.push(BasisName::Eij(i, j));
        }
    }
    for m in masks_of_size(3) {
        elems.push(ETElem::Ext(Sign::Plus, m));
        degrees.push((1, 0));
        names.push(BasisName::VS(Sign::Plus, m));
    }
    elems.push(ETElem::Ext(Sign::Plus, FULL_MASK));
    degrees.push((2, 0));
    names.push(BasisName::VFull(Sign::Plus));

    let mut l = GradedLieAlgebra::new(field, degrees, GradingKind::Z);
    for i in 0..elems.len() {
        for j in (i + 1)..elems.len() {
            let val = bracket_elems(fs, &elems[i], &elems[j])?;
            l.set_bracket(i, j, e_coords(field, &val, &names)?);
        }
    }
    Ok(E6Algebra { algebra: l, names, fs: fs.clone() })
}

/// Coordinates of an `ETValue` in the 78-dim named basis; errors when the
/// operator part is outside the kernel of `lambda`.
fn e_coords(field: Field, v: &ETValue, names: &[BasisName]) -> Result<Vec<(usize, Scalar)>> {
    if !v.s.lambda().is_zero() {
        return Err(Error::Closure("bracket left the kernel of lambda".into()));
    }
    let m3 = masks_of_size(3);
    let pos3 = |m: Mask| m3.iter().position(|x| *x == m).expect("degree-3 mask");
    let idx_of = |name: BasisName| names.iter().position(|n| *n == name).expect("named basis");
    let mut out: Vec<(usize, Scalar)> = Vec::new();
    for (m, c) in &v.ext[0].terms {
        if *m == FULL_MASK {
            out.push((idx_of(BasisName::VFull(Sign::Minus)), c.clone()));
        } else {
            out.push((1 + pos3(*m), c.clone()));
        }
    }
    for (m, c) in &v.ext[1].terms {
        if *m == FULL_MASK {
            out.push((idx_of(BasisName::VFull(Sign::Plus)), c.clone()));
        } else {
            out.push((idx_of(BasisName::VS(Sign::Plus, m3[0])) + pos3(*m), c.clone()));
        }
    }
    // operator part: X = (A, a) with tr A + 3a = 0 decomposes as
    // c6 = -a; B = A + a (E44+E55+E66); off-diagonal entries directly;
    // diagonal d of B via the telescoping h_1..h_5 coordinates.
    let a = &v.s.h0_coeff;
    if !v.s.a_plus.is_zero() || !a.is_zero() {
        let c6 = a.neg();
        if !c6.is_zero() {
            out.push((idx_of(BasisName::H(6)), c6.clone()));
        }
        let mut b = v.s.a_plus.clone();
        for i in 3..6 {
            let cur = b.get(i, i).add(a);
            b.set(i, i, cur);
        }
        for i in 0..6 {
            for j in 0..6 {
                if i == j {
                    continue;
                }
                let c = b.get(i, j);
                if !c.is_zero() {
                    out.push((idx_of(BasisName::Eij(i, j)), c.clone()));
                }
            }
        }
        let mut run = field.zero();
        for i in 0..5 {
            run = run.add(b.get(i, i));
            if !run.is_zero() {
                out.push((idx_of(BasisName::H(i + 1)), run.clone()));
            }
        }
        // consistency: the running sum plus the last diagonal entry vanishes
        let total = run.add(b.get(5, 5));
        if !total.is_zero() {
            return Err(Error::Closure("operator part failed the trace decomposition".into()));
        }
    }
    out.sort_by_key(|(i, _)| *i);
    Ok(out)
}

/// One root of the decomposition.
#[derive(Debug, Clone)]
pub struct RootInfo {
    /// Coefficients in the orthonormal display basis `e_1..e_6`.
    pub eps: Vec<Scalar>,
    /// Coefficients over the simple system `mu_1..mu_6`.
    pub simple_coords: [i64; 6],
    /// Index of the root vector in the algebra basis.
    pub vector: usize,
}

pub struct RootDecomposition {
    pub roots: Vec<RootInfo>,
    /// Indices into `roots` of the simple system `mu_1..mu_6`.
    pub pi: [usize; 6],
    pub cartan: [[i64; 6]; 6],
}

/// Simultaneous eigenspace decomposition of the adjoint action of the span of
/// `h_1..h_6`. The fixture basis is an eigenbasis; a non-diagonal action
/// aborts with an error.
pub fn root_decomposition(e6: &E6Algebra) -> Result<RootDecomposition> {
    if e6.algebra.field != Field::Q {
        return Err(Error::Field("root decomposition runs over Q".into()));
    }
    let field = e6.algebra.field;
    let h_idx = e6.h_indices();
    let n = e6.algebra.dim;
    // eigenvalues of each basis vector under ad(h_i)
    let mut eig: Vec<Option<Vec<Scalar>>> = vec![None; n];
    for t in 0..n {
        if h_idx.contains(&t) {
            continue;
        }
        let mut vals = Vec::new();
        for &h in &h_idx {
            let terms = e6.algebra.bracket_terms(h, t);
            let mut val = field.zero();
            for (k, c) in terms {
                if k == t {
                    val = c;
                } else if !c.is_zero() {
                    return Err(Error::Precondition(
                        "basis is not an eigenbasis for the Cartan span".into(),
                    ));
                }
            }
            vals.push(val);
        }
        eig[t] = Some(vals);
    }
    // eps coordinates: eps_j(h_i) pairing matrix
    let mut pairing = Matrix::zero(field, 6, 6);
    for i in 0..5 {
        pairing.set(i, i, field.one());
        pairing.set(i, i + 1, field.from_i64(-1));
    }
    for j in 0..6 {
        let v = if j < 3 {
            field.from_i64(-1).div(&field.from_i64(3))
        } else {
            field.from_i64(2).div(&field.from_i64(3))
        };
        pairing.set(5, j, v);
    }
    let solver = crate::linalg::LinearSolver::new(pairing);
    let mut roots = Vec::new();
    for t in 0..n {
        let Some(vals) = &eig[t] else { continue };
        if vals.iter().all(|v| v.is_zero()) {
            return Err(Error::Precondition(
                "a basis vector outside the Cartan has zero eigenvalues".into(),
            ));
        }
        let eps = solver
            .solve(vals)
            .ok_or_else(|| Error::Closure("eigenvalue tuple outside the weight lattice".into()))?;
        roots.push(RootInfo { eps, simple_coords: [0; 6], vector: t });
    }
    if roots.len() != n - 6 {
        return Err(Error::Precondition("root spaces do not exhaust the complement".into()));
    }
    // distinctness makes each root space one-dimensional
    {
        let mut seen = std::collections::BTreeSet::new();
        for r in &roots {
            let key: Vec<String> = r.eps.iter().map(|c| c.to_canonical_string()).collect();
            if !seen.insert(key) {
                return Err(Error::Precondition("repeated root; root spaces not 1-dimensional".into()));
            }
        }
    }
    // the simple system mu_i = e_i - e_{i+1} (i = 1..5), mu_6 = e_4 + e_5 + e_6
    let mut pi = [usize::MAX; 6];
    for (ri, r) in roots.iter().enumerate() {
        for i in 0..5 {
            let mut want = vec![field.zero(); 6];
            want[i] = field.one();
            want[i + 1] = field.from_i64(-1);
            if r.eps == want {
                pi[i] = ri;
            }
        }
        let mut want = vec![field.zero(); 6];
        for j in 3..6 {
            want[j] = field.one();
        }
        if r.eps == want {
            pi[5] = ri;
        }
    }
    if pi.iter().any(|&x| x == usize::MAX) {
        return Err(Error::Precondition("simple system not found among the roots".into()));
    }
    // simple coordinates: solve eps = sum_j k_j mu_j over the rationals
    let mu_eps: Vec<Vec<Scalar>> = pi.iter().map(|&ri| roots[ri].eps.clone()).collect();
    let mu_mat = Matrix::from_fn(field, 6, 6, |r, c| mu_eps[c][r].clone());
    let mu_solver = crate::linalg::LinearSolver::new(mu_mat);
    for r in roots.iter_mut() {
        let k = mu_solver
            .solve(&r.eps)
            .ok_or_else(|| Error::Closure("root outside the simple-root lattice".into()))?;
        for (j, v) in k.iter().enumerate() {
            r.simple_coords[j] = scalar_to_i64(v)?;
        }
    }
    // Cartan integers from root strings
    let root_set: std::collections::BTreeSet<Vec<String>> = roots
        .iter()
        .map(|r| r.eps.iter().map(|c| c.to_canonical_string()).collect())
        .collect();
    let contains = |eps: &[Scalar]| {
        let key: Vec<String> = eps.iter().map(|c| c.to_canonical_string()).collect();
        root_set.contains(&key)
    };
    let mut cartan = [[0i64; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            if i == j {
                cartan[i][j] = 2;
                continue;
            }
            let alpha = &roots[pi[i]].eps;
            let beta = &roots[pi[j]].eps;
            let shift = |t: i64| -> Vec<Scalar> {
                alpha
                    .iter()
                    .zip(beta.iter())
                    .map(|(a, b)| a.add(&field.from_i64(t).mul(b)))
                    .collect()
            };
            let mut p = 0i64;
            while contains(&shift(-(p + 1))) {
                p += 1;
            }
            let mut q = 0i64;
            while contains(&shift(q + 1)) {
                q += 1;
            }
            cartan[i][j] = p - q;
        }
    }
    Ok(RootDecomposition { roots, pi, cartan })
}

fn scalar_to_i64(s: &Scalar) -> Result<i64> {
    match s {
        Scalar::Q(r) => {
            use num_traits::{One, ToPrimitive};
            if !r.denom().is_one() {
                return Err(Error::Parse("expected an integer".into()));
            }
            r.numer()
                .to_i64()
                .ok_or_else(|| Error::Parse("integer out of range".into()))
        }
        Scalar::Gf { v, .. } => Ok(*v as i64),
    }
}

/// The expected E6 Cartan matrix with nodes 1-2-3-4-5 in a chain and node 6
/// attached to node 3.
pub fn e6_cartan_matrix() -> [[i64; 6]; 6] {
    let mut a = [[0i64; 6]; 6];
    for i in 0..6 {
        a[i][i] = 2;
    }
    for i in 0..4 {
        a[i][i + 1] = -1;
        a[i + 1][i] = -1;
    }
    a[2][5] = -1;
    a[5][2] = -1;
    a
}

pub struct ChevalleyReport {
    pub a_ok: bool,
    pub b_ok: bool,
    pub c_ok: bool,
}

/// Verifies the Chevalley-basis conditions: `[h_mu, x_mu] = 2 x_mu` with
/// `h_mu = [x_mu, x_{-mu}]`; `h_{mu_i} = h_i`; and the dual-bases swap
/// composed with the opposite-triple identification is a bracket-preserving
/// involution acting as `x_mu -> -x_{-mu}`, `h_i -> -h_i`.
pub fn chevalley_checks(e6: &E6Algebra, rd: &RootDecomposition) -> Result<ChevalleyReport> {
    let field = e6.algebra.field;
    let n = e6.algebra.dim;
    let neg_index: BTreeMap<usize, usize> = {
        // map root-vector index -> vector index of the negative root
        let mut m = BTreeMap::new();
        for r in &rd.roots {
            let negated: Vec<Scalar> = r.eps.iter().map(|c| c.neg()).collect();
            let other = rd
                .roots
                .iter()
                .find(|s| s.eps == negated)
                .ok_or_else(|| Error::Precondition("root system is not symmetric".into()))?;
            m.insert(r.vector, other.vector);
        }
        m
    };
    // (a)
    let mut a_ok = true;
    for r in &rd.roots {
        let neg = neg_index[&r.vector];
        let h_mu = {
            let mut v = vec![field.zero(); n];
            for (k, c) in e6.algebra.bracket_terms(r.vector, neg) {
                v[k] = c;
            }
            v
        };
        let x_mu = crate::linalg::unit_vec(field, n, r.vector);
        let lhs = e6.algebra.bracket(&h_mu, &x_mu)?;
        let want: Vec<Scalar> = x_mu.iter().map(|c| c.mul(&field.from_i64(2))).collect();
        if lhs != want {
            a_ok = false;
            break;
        }
    }
    // (b)
    let h_idx = e6.h_indices();
    let mut b_ok = true;
    for (i, &ri) in rd.pi.iter().enumerate() {
        let r = &rd.roots[ri];
        let neg = neg_index[&r.vector];
        let mut v = vec![field.zero(); n];
        for (k, c) in e6.algebra.bracket_terms(r.vector, neg) {
            v[k] = c;
        }
        let want = crate::linalg::unit_vec(field, n, h_idx[i]);
        if v != want {
            b_ok = false;
            break;
        }
    }
    // (c): the involution on the named basis
    let mut phi = Matrix::zero(field, n, n);
    for (t, name) in e6.names.iter().enumerate() {
        let (img, sign) = match name {
            BasisName::H(i) => (BasisName::H(*i), -1),
            BasisName::Eij(i, j) => (BasisName::Eij(*j, *i), -1),
            BasisName::VS(s, m) => (BasisName::VS(s.flip(), *m), -1),
            BasisName::VFull(s) => (BasisName::VFull(s.flip()), -1),
            BasisName::H0 => unreachable!("78-dim basis has no h0"),
        };
        let idx = e6.index_of(img).expect("closed under the swap");
        phi.set(idx, t, field.from_i64(sign));
    }
    let mut c_ok = true;
    // involution
    let phi2 = phi.mat_mul(&phi);
    if phi2 != Matrix::identity(field, n) {
        c_ok = false;
    }
    // automorphism on all basis pairs
    if c_ok {
        'outer: for i in 0..n {
            for j in (i + 1)..n {
                let mut br = vec![field.zero(); n];
                for (k, c) in e6.algebra.bracket_terms(i, j) {
                    br[k] = c;
                }
                let lhs = phi.mat_vec(&br);
                let rhs = e6
                    .algebra
                    .bracket(&col_of(&phi, i), &col_of(&phi, j))?;
                if lhs != rhs {
                    c_ok = false;
                    break 'outer;
                }
            }
        }
    }
    // stated action on root vectors
    if c_ok {
        for r in &rd.roots {
            let img = col_of(&phi, r.vector);
            let neg = neg_index[&r.vector];
            for (t, c) in img.iter().enumerate() {
                let want = if t == neg { field.from_i64(-1) } else { field.zero() };
                if *c != want {
                    c_ok = false;
                }
            }
        }
    }
    Ok(ChevalleyReport { a_ok, b_ok, c_ok })
}

fn col_of(m: &Matrix, j: usize) -> Vec<Scalar> {
    (0..m.rows).map(|i| m.get(i, j).clone()).collect()
}

/// Validates that the hyperbolic pair is the first dual-basis pair and the
/// form splits off `K e` orthogonally, which the degree assignments assume.
fn check_split_e(fs: &FormSpace) -> Result<()> {
    let (em, ep) = fs
        .e
        .as_ref()
        .ok_or_else(|| Error::Precondition("the BC2 grading needs the hyperbolic pair e".into()))?;
    let field = fs.field;
    let first = crate::linalg::unit_vec(field, fs.n, 0);
    if *em != first || *ep != first {
        return Err(Error::Precondition(
            "the BC2 grading is implemented for e = (v_1^-, v_1^+)".into(),
        ));
    }
    for j in 1..fs.n {
        if !fs.g.get(0, j).is_zero() || !fs.g.get(j, 0).is_zero() {
            return Err(Error::Precondition(
                "the form must split K e orthogonally from U".into(),
            ));
        }
    }
    if !fs.g.get(0, 0).is_one() {
        return Err(Error::Precondition("g(e^-, e^+) must be 1".into()));
    }
    Ok(())
}

/// The BC2-grading of the 78-dim algebra induced by `e`.
pub fn bc2_on_e(e6: &E6Algebra) -> Result<E6Algebra> {
    check_split_e(&e6.fs)?;
    let mut algebra = e6.algebra.clone();
    for (t, name) in e6.names.iter().enumerate() {
        let d: Degree = match name {
            BasisName::VS(s, m) => {
                let su = s.unit();
                if m & 1 != 0 {
                    (su, su)
                } else {
                    (su, 0)
                }
            }
            BasisName::VFull(s) => (2 * s.unit(), s.unit()),
            BasisName::H(_) => (0, 0),
            BasisName::Eij(i, j) => {
                if *i == 0 && *j != 0 {
                    (0, 1)
                } else if *j == 0 && *i != 0 {
                    (0, -1)
                } else {
                    (0, 0)
                }
            }
            BasisName::H0 => unreachable!(),
        };
        algebra.degrees[t] = d;
    }
    algebra.grading = GradingKind::Z2;
    let rep = algebra.grading_check(&crate::bc2::bc2_support());
    if !rep.ok {
        return Err(Error::Grading("induced BC2 grading failed the support check".into()));
    }
    Ok(E6Algebra { algebra, names: e6.names.clone(), fs: e6.fs.clone() })
}

/// The 20-per-side pair on the degree-3 exterior powers with products
/// `E^s(x, y) o z - (x . y) z`, built directly from the exterior operations
/// (not through the algebra). With `e` present the basis is label-sorted
/// (masks without index 1 first) and SP labels are attached.
pub fn lambda3_pair(fs: &FormSpace) -> Result<TrilinearPair> {
    check_rank6(fs)?;
    let field = fs.field;
    let with_e = fs.e.is_some();
    if with_e {
        check_split_e(fs)?;
    }
    let basis: Vec<Mask> = if with_e {
        let mut b: Vec<Mask> = masks_of_size(3).into_iter().filter(|m| m & 1 == 0).collect();
        b.extend(masks_of_size(3).into_iter().filter(|m| m & 1 != 0));
        b
    } else {
        masks_of_size(3)
    };
    let pos_of: BTreeMap<Mask, usize> = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut p = TrilinearPair::new(field, 20, 20);
    for sigma in Sign::BOTH {
        for (i, &mi) in basis.iter().enumerate() {
            let x = ExtElement::basis(sigma, mi, field);
            for (j, &mj) in basis.iter().enumerate() {
                let y = ExtElement::basis(sigma.flip(), mj, field);
                // the operator element E(x^s, y^{-s}) whose s-component is
                // E^s(x, y): its plus component is E^+(x, y) for s = +, and
                // -E^+(y, x) for s = -
                let a_plus = match sigma {
                    Sign::Plus => e_operator(fs, &x, &y)?,
                    Sign::Minus => e_operator(fs, &y, &x)?.scale(&field.from_i64(-1)),
                };
                let dot = inner_scalar(fs, &y, &x)?;
                let st = STildeElement::iota_plus(a_plus);
                if e_op_is_zero(&st) && dot.is_zero() {
                    continue;
                }
                for (k, &mk) in basis.iter().enumerate() {
                    let z = ExtElement::basis(sigma, mk, field);
                    let mut val = circ_action(fs, &st, &z)?;
                    if !dot.is_zero() {
                        val.add_assign(&z.scaled(&dot.neg()));
                    }
                    let mut out = Vec::new();
                    for (m, c) in &val.terms {
                        out.push((pos_of[m], c.clone()));
                    }
                    p.set_basis_product(sigma, i, j, k, out);
                }
            }
        }
    }
    if with_e {
        let labels: Vec<i64> = basis.iter().map(|m| if m & 1 != 0 { 1 } else { 0 }).collect();
        p.sp_labels = Some([labels.clone(), labels]);
    }
    Ok(p)
}

fn e_op_is_zero(s: &STildeElement) -> bool {
    s.a_plus.is_zero() && s.h0_coeff.is_zero()
}

/// Regrades the algebra by a weighted Dynkin diagram: the root space of
/// `mu = sum k_j mu_j` sits at degree `sum k_j p_j`, the Cartan span at 0.
pub fn weighted_grading(e6: &E6Algebra, rd: &RootDecomposition, p: &[i64; 6]) -> GradedLieAlgebra {
    let mut algebra = e6.algebra.clone();
    for d in algebra.degrees.iter_mut() {
        *d = (0, 0);
    }
    for r in &rd.roots {
        let chi: i64 = r.simple_coords.iter().zip(p.iter()).map(|(k, w)| k * w).sum();
        algebra.degrees[r.vector] = (chi, 0);
    }
    algebra.grading = GradingKind::Z;
    algebra
}

/// `chi_p` evaluated on the highest root, and whether some weight is 1; the
/// grading is a 5-grading with nonzero (+-1)-parts exactly when the value is
/// at most 2 and some weight is 1.
pub fn weighted_profile(rd: &RootDecomposition, p: &[i64; 6]) -> (i64, bool) {
    let max_chi = rd
        .roots
        .iter()
        .map(|r| r.simple_coords.iter().zip(p.iter()).map(|(k, w)| k * w).sum())
        .max()
        .unwrap_or(0);
    (max_chi, p.iter().any(|&w| w == 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fsq() -> FormSpace {
        FormSpace::standard(Field::Q, 6, false)
    }

    fn mask(ids: &[u8]) -> Mask {
        ids.iter().fold(0u8, |m, i| m | (1 << (i - 1)))
    }

    #[test]
    fn wedge_examples() {
        let f = Field::Q;
        // v1 v2 . v2 v3 = 0 (repeated index)
        let a = ExtElement::basis(Sign::Plus, mask(&[1, 2]), f);
        let b = ExtElement::basis(Sign::Plus, mask(&[2, 3]), f);
        assert!(ext_product(f, &a, &b).unwrap().is_zero());
        // v123+ . v456+ = + v[1,6]+
        let a = ExtElement::basis(Sign::Plus, mask(&[1, 2, 3]), f);
        let b = ExtElement::basis(Sign::Plus, mask(&[4, 5, 6]), f);
        let p = ext_product(f, &a, &b).unwrap();
        assert_eq!(p.terms.get(&FULL_MASK), Some(&f.one()));
        // v2 . v1 = -v1 v2 in degree 1
        let v2 = ExtElement::basis(Sign::Plus, mask(&[2]), f);
        let v1 = ExtElement::basis(Sign::Plus, mask(&[1]), f);
        let p = ext_product(f, &v2, &v1).unwrap();
        assert_eq!(p.terms.get(&mask(&[1, 2])), Some(&f.from_i64(-1)));
        // graded commutativity in odd degrees: anticommute
        let q = ext_product(f, &v1, &v2).unwrap();
        assert_eq!(q.terms.get(&mask(&[1, 2])), Some(&f.one()));
    }

    #[test]
    fn inner_action_examples() {
        let fs = fsq();
        let f = fs.field;
        // v1^- . (v1+ v2+) = v2+
        let a = ExtElement::basis(Sign::Minus, mask(&[1]), f);
        let x = ExtElement::basis(Sign::Plus, mask(&[1, 2]), f);
        let r = inner_action(&fs, &a, &x).unwrap();
        assert_eq!(r.terms.get(&mask(&[2])), Some(&f.one()));
        // v_S^- . v_S^+ = 1 for every |S| = 3, and the dual way round
        for m in masks_of_size(3) {
            let am = ExtElement::basis(Sign::Minus, m, f);
            let xp = ExtElement::basis(Sign::Plus, m, f);
            assert_eq!(inner_scalar(&fs, &am, &xp).unwrap(), f.one(), "mask {m:#04x}");
            let ap = ExtElement::basis(Sign::Plus, m, f);
            let xm = ExtElement::basis(Sign::Minus, m, f);
            assert_eq!(inner_scalar(&fs, &ap, &xm).unwrap(), f.one(), "mask {m:#04x}");
            // distinct masks pair to zero
            for t in masks_of_size(3) {
                if t != m {
                    let at = ExtElement::basis(Sign::Minus, t, f);
                    assert!(inner_scalar(&fs, &at, &xp).unwrap().is_zero());
                }
            }
        }
        // v1^+ . v123^- lands on the {2,3} basis vector positively
        let a = ExtElement::basis(Sign::Plus, mask(&[1]), f);
        let x = ExtElement::basis(Sign::Minus, mask(&[1, 2, 3]), f);
        let r = inner_action(&fs, &a, &x).unwrap();
        assert_eq!(r.terms.get(&mask(&[2, 3])), Some(&f.one()));
    }

    #[test]
    fn anti_derivation_law() {
        // Delta_a(xy) = Delta_a(x) y + (-1)^k x Delta_a(y) for degree-1 a
        let fs = fsq();
        let f = fs.field;
        for ai in 1..=6u8 {
            let a = ExtElement::basis(Sign::Minus, mask(&[ai]), f);
            for xm in masks_of_size(2) {
                for ym in masks_of_size(2) {
                    let x = ExtElement::basis(Sign::Plus, xm, f);
                    let y = ExtElement::basis(Sign::Plus, ym, f);
                    let xy = ext_product(f, &x, &y).unwrap();
                    let lhs = inner_action(&fs, &a, &xy).unwrap();
                    let mut rhs = ext_product(f, &inner_action(&fs, &a, &x).unwrap(), &y).unwrap();
                    // k = 2 even: +
                    rhs.add_assign(&ext_product(f, &x, &inner_action(&fs, &a, &y).unwrap()).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn pairing_nondegeneracy_and_top_transfer() {
        let fs = fsq();
        let f = fs.field;
        // nondegeneracy: every basis x of /\_k pairs nontrivially with some v_T
        for k in 1..=6u32 {
            for m in masks_of_size(k) {
                let x = ExtElement::basis(Sign::Plus, m, f);
                let hit = masks_of_size(k).into_iter().any(|t| {
                    let a = ExtElement::basis(Sign::Minus, t, f);
                    !inner_scalar(&fs, &a, &x).unwrap().is_zero()
                });
                assert!(hit);
            }
        }
        // top-degree transfer: (a . p) . q = (p . q) a on basis data
        let p = ExtElement::basis(Sign::Plus, FULL_MASK, f);
        let q = ExtElement::basis(Sign::Minus, FULL_MASK, f);
        let pq = inner_scalar(&fs, &q, &p).unwrap();
        for k in 0..=6u32 {
            for m in masks_of_size(k) {
                let a = ExtElement::basis(Sign::Minus, m, f);
                let ap = inner_action(&fs, &a, &p).unwrap();
                let lhs = inner_action(&fs, &ap, &q).unwrap();
                let rhs = a.scaled(&pq);
                assert_eq!(lhs, rhs, "k = {k}, mask {m:#04x}");
            }
        }
    }

    #[test]
    fn circ_examples_and_action_compatibility() {
        let fs = fsq();
        let f = fs.field;
        // iota(E11) o v123+ = v123+
        let mut e11 = Matrix::zero(f, 6, 6);
        e11.set(0, 0, f.one());
        let s = STildeElement::iota_plus(e11);
        let x = ExtElement::basis(Sign::Plus, mask(&[1, 2, 3]), f);
        assert_eq!(circ_action(&fs, &s, &x).unwrap(), x);
        // iota(id) o v[1,6]+ = 6 v[1,6]+ (top-degree trace law)
        let idm = STildeElement::h_m(f);
        let top = ExtElement::basis(Sign::Plus, FULL_MASK, f);
        assert_eq!(circ_action(&fs, &idm, &top).unwrap(), top.scaled(&f.from_i64(6)));
        // h0 o v[1,6]^- = -2 v[1,6]^-
        let h0 = STildeElement::h0(f);
        let topm = ExtElement::basis(Sign::Minus, FULL_MASK, f);
        assert_eq!(circ_action(&fs, &h0, &topm).unwrap(), topm.scaled(&f.from_i64(-2)));
        // compatibility of the two actions: A o (a . x) = (A o a) . x + a . (A o x)
        let mut a12 = Matrix::zero(f, 6, 6);
        a12.set(0, 1, f.one());
        a12.set(3, 4, f.from_i64(2));
        let s = STildeElement::iota_plus(a12);
        for am in masks_of_size(1).into_iter().chain(masks_of_size(3)) {
            for xm in masks_of_size(3) {
                let a = ExtElement::basis(Sign::Minus, am, f);
                let x = ExtElement::basis(Sign::Plus, xm, f);
                let ax = inner_action(&fs, &a, &x).unwrap();
                let lhs = circ_matrix_only(&fs, &s, &ax);
                let mut rhs = inner_action(&fs, &circ_matrix_only(&fs, &s, &a), &x).unwrap();
                rhs.add_assign(&inner_action(&fs, &a, &circ_matrix_only(&fs, &s, &x)).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    fn circ_matrix_only(fs: &FormSpace, s: &STildeElement, x: &ExtElement) -> ExtElement {
        let st = STildeElement { a_plus: s.a_plus.clone(), h0_coeff: fs.field.zero() };
        circ_action(fs, &st, x).unwrap()
    }

    #[test]
    fn e_operator_examples() {
        let fs = fsq();
        let f = fs.field;
        let x = ExtElement::basis(Sign::Plus, mask(&[1, 2, 3]), f);
        let a = ExtElement::basis(Sign::Minus, mask(&[1, 2, 3]), f);
        let e = e_operator(&fs, &x, &a).unwrap();
        let mut want = Matrix::zero(f, 6, 6);
        for i in 0..3 {
            want.set(i, i, f.one());
        }
        assert_eq!(e, want);
        assert_eq!(e.trace(), f.from_i64(3));
        // disjoint supports annihilate
        let b = ExtElement::basis(Sign::Minus, mask(&[4, 5, 6]), f);
        assert!(e_operator(&fs, &x, &b).unwrap().is_zero());
        // adjoint and trace laws on all degree-3 pairs
        for xm in masks_of_size(3) {
            for am in masks_of_size(3) {
                let x = ExtElement::basis(Sign::Plus, xm, f);
                let a = ExtElement::basis(Sign::Minus, am, f);
                let e1 = e_operator(&fs, &x, &a).unwrap();
                let e2 = e_operator(&fs, &a, &x).unwrap();
                // with g = id the adjoint is the transpose
                assert_eq!(e1.transpose(), e2);
                let dot = inner_scalar(&fs, &a, &x).unwrap();
                assert_eq!(e1.trace(), f.from_i64(3).mul(&dot));
            }
        }
    }

    #[test]
    fn e_tilde_shape_and_identities() {
        let fs = fsq();
        let f = fs.field;
        let l = build_e_tilde(&fs).unwrap();
        assert_eq!(l.dim, 79);
        let dims = l.degree_dims_first();
        assert_eq!(
            (dims[&-2], dims[&-1], dims[&0], dims[&1], dims[&2]),
            (1, 20, 37, 20, 1)
        );
        // [h0, v_S^+] = v_S^+
        let h0 = 57;
        let vs = 58;
        assert_eq!(l.bracket_terms(h0, vs), vec![(vs, f.one())]);
        // h_M - 3 h0 central
        let mut hm3 = vec![f.zero(); 79];
        for i in 0..6 {
            hm3[21 + i * 6 + i] = f.one();
        }
        hm3[57] = f.from_i64(-3);
        assert!(l.center().contains_vec(&hm3));
        // [v_S^+, v_S^-] = iota(E_ii + E_jj + E_kk) - h0 for S = {1,2,3}
        let m3 = masks_of_size(3);
        let s_pos = m3.iter().position(|&m| m == 0b000111).unwrap();
        let terms = l.bracket_terms(58 + s_pos, 1 + s_pos);
        let mut want = vec![f.zero(); 79];
        for i in 0..3 {
            want[21 + i * 6 + i] = f.one();
        }
        want[57] = f.from_i64(-1);
        let mut got = vec![f.zero(); 79];
        for (k, c) in terms {
            got[k] = c;
        }
        assert_eq!(got, want);
        // [v123+, v456+] = +v[1,6]+
        let s1 = m3.iter().position(|&m| m == 0b000111).unwrap();
        let s2 = m3.iter().position(|&m| m == 0b111000).unwrap();
        assert_eq!(l.bracket_terms(58 + s1, 58 + s2), vec![(78, f.one())]);
    }

    #[test]
    fn e_shape_and_center() {
        let fs = fsq();
        let e6 = build_e(&fs).unwrap();
        assert_eq!(e6.algebra.dim, 78);
        let dims = e6.algebra.degree_dims_first();
        assert_eq!(
            (dims[&-2], dims[&-1], dims[&0], dims[&1], dims[&2]),
            (1, 20, 36, 20, 1)
        );
        assert_eq!(e6.algebra.center().dim(), 0);
        assert_eq!(e6.algebra.derived_algebra().dim(), 78);
        assert_eq!(e6.algebra.centroid_lie(false).dim(), 1);
    }

    #[test]
    fn e_tilde_jacobi_and_derived_over_q() {
        let fs = fsq();
        let et = build_e_tilde(&fs).unwrap();
        assert!(et.jacobi_check().is_none());
        assert_eq!(et.derived_algebra().dim(), 78);
    }

    #[test]
    fn lambda3_product_examples() {
        let fs = fsq();
        let f = fs.field;
        let p = lambda3_pair(&fs).unwrap();
        assert_eq!(p.dims(), (20, 20));
        let m3 = masks_of_size(3);
        let pos = |ids: &[u8]| m3.iter().position(|&m| m == mask(ids)).unwrap();
        let unit = |i: usize| crate::linalg::unit_vec(f, 20, i);
        // {v123+, v123-, v123+} = 2 v123+
        let i = pos(&[1, 2, 3]);
        let out = p
            .triple_product(Sign::Plus, &unit(i), &unit(i), &unit(i))
            .unwrap();
        assert_eq!(out[i], f.from_i64(2));
        assert!(out.iter().enumerate().all(|(t, c)| t == i || c.is_zero()));
        // {v123+, v123-, v145+} = 0
        let j = pos(&[1, 4, 5]);
        let out = p
            .triple_product(Sign::Plus, &unit(i), &unit(i), &unit(j))
            .unwrap();
        assert!(out.iter().all(|c| c.is_zero()));
        // {v123+, v456-, v123+} = 0
        let k = pos(&[4, 5, 6]);
        let out = p
            .triple_product(Sign::Plus, &unit(i), &unit(k), &unit(i))
            .unwrap();
        assert!(out.iter().all(|c| c.is_zero()));
        // {v123+, v123-, v124+} = v124+
        let l = pos(&[1, 2, 4]);
        let out = p
            .triple_product(Sign::Plus, &unit(i), &unit(i), &unit(l))
            .unwrap();
        assert_eq!(out[l], f.one());
        assert!(out.iter().enumerate().all(|(t, c)| t == l || c.is_zero()));
    }

    #[test]
    fn lambda3_k_operator_and_not_jordan() {
        let fs = fsq();
        let f = fs.field;
        let p = lambda3_pair(&fs).unwrap();
        assert!(!p.is_jordan());
        // K+(v123+, v456+) is nonzero (the enveloping bracket hits the top vector)
        let m3 = masks_of_size(3);
        let i = m3.iter().position(|&m| m == 0b000111).unwrap();
        let j = m3.iter().position(|&m| m == 0b111000).unwrap();
        let k = p
            .k_operator(
                Sign::Plus,
                &crate::linalg::unit_vec(f, 20, i),
                &crate::linalg::unit_vec(f, 20, j),
            )
            .unwrap();
        assert!(!k.is_zero());
    }

    #[test]
    fn lambda3_matches_enveloped_pair() {
        let fs = fsq();
        let e6 = build_e(&fs).unwrap();
        let enveloped = crate::kantor::enveloped_pair(&e6.algebra).unwrap();
        let direct = lambda3_pair(&fs).unwrap();
        for sigma in Sign::BOTH {
            assert_eq!(direct.tensor(sigma), enveloped.tensor(sigma));
        }
    }

    #[test]
    fn bc2_degrees_on_e() {
        let fs = FormSpace::standard(Field::Q, 6, true);
        let e6 = build_e(&fs).unwrap();
        let graded = bc2_on_e(&e6).unwrap();
        let dims = graded.algebra.degree_dims_z2();
        for s in [-1i64, 1] {
            assert_eq!(dims.get(&(s, 0)), Some(&10));
            assert_eq!(dims.get(&(s, s)), Some(&10));
            assert_eq!(dims.get(&(2 * s, s)), Some(&1));
            assert_eq!(dims.get(&(0, s)), Some(&5));
        }
        assert_eq!(dims.get(&(0, 0)), Some(&26));
        for d in [(2i64, 0i64), (2, 2), (-2, 0), (-2, -2)] {
            assert!(dims.get(&d).is_none());
        }
        // first component grading is the 5-grading
        let first = graded.algebra.component_grading(true);
        let fd = first.degree_dims_first();
        assert_eq!(
            (fd[&-2], fd[&-1], fd[&0], fd[&1], fd[&2]),
            (1, 20, 36, 20, 1)
        );
    }
}
