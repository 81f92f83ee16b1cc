//! Skew-transformation constructions from a nondegenerate bilinear form
//! `g : V^- x V^+ -> K`: the operators `zeta(v, w)`, the 3-graded algebra of
//! finite-rank skew transformations of the hyperbolic extension, its Jordan
//! pair, and the BC2/SP gradings induced by a hyperbolic pair `e`.

use crate::field::{Field, Scalar};
use crate::kantor::pair_on_components;
use crate::lie::{Degree, GradedLieAlgebra, GradingKind};
use crate::linalg::{kernel_basis, LinearSolver, Matrix, RowSpace, Subspace};
use crate::pairs::{double_of_triple, ProductTensor, Sign, TrilinearPair};
use crate::{Error, Result};

/// A nondegenerate bilinear form on a pair of n-dimensional spaces, with an
/// optional hyperbolic pair `e = (e^-, e^+)`, `g(e^-, e^+) = 1`.
#[derive(Debug, Clone)]
pub struct FormSpace {
    pub field: Field,
    pub n: usize,
    /// `g(v_i^-, v_j^+)` entries.
    pub g: Matrix,
    pub e: Option<(Vec<Scalar>, Vec<Scalar>)>,
}

impl FormSpace {
    pub fn new(field: Field, g: Matrix, e: Option<(Vec<Scalar>, Vec<Scalar>)>) -> Result<FormSpace> {
        if g.rows != g.cols {
            return Err(Error::Shape("form matrix must be square".into()));
        }
        let n = g.rows;
        let (_, rank, _) = crate::linalg::rref(&g);
        if rank != n {
            return Err(Error::Precondition("singular form".into()));
        }
        if let Some((em, ep)) = &e {
            if em.len() != n || ep.len() != n {
                return Err(Error::Shape("hyperbolic pair has wrong length".into()));
            }
            let mut val = field.zero();
            for i in 0..n {
                for j in 0..n {
                    let t = em[i].mul(g.get(i, j)).mul(&ep[j]);
                    val = val.add(&t);
                }
            }
            if !val.is_one() {
                return Err(Error::Precondition("g(e^-, e^+) must be 1".into()));
            }
        }
        Ok(FormSpace { field, n, g, e })
    }

    /// The standard fixture: `g` the identity on dual bases, and
    /// `e = (v_1^-, v_1^+)` when requested.
    pub fn standard(field: Field, n: usize, with_e: bool) -> FormSpace {
        let e = with_e.then(|| {
            (
                crate::linalg::unit_vec(field, n, 0),
                crate::linalg::unit_vec(field, n, 0),
            )
        });
        FormSpace::new(field, Matrix::identity(field, n), e).expect("identity form is valid")
    }

    /// `g(x^-, y^+)`.
    pub fn pair(&self, xm: &[Scalar], yp: &[Scalar]) -> Scalar {
        let mut v = self.field.zero();
        for i in 0..self.n {
            if xm[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if yp[j].is_zero() {
                    continue;
                }
                v = v.add(&xm[i].mul(self.g.get(i, j)).mul(&yp[j]));
            }
        }
        v
    }

    /// The hyperbolic extension on `V~ = V^- + V^+` (coordinates: minus block
    /// first).
    pub fn g_tilde(&self) -> Matrix {
        let n = self.n;
        Matrix::from_fn(self.field, 2 * n, 2 * n, |r, c| {
            if r < n && c >= n {
                self.g.get(r, c - n).clone()
            } else if r >= n && c < n {
                self.g.get(c, r - n).clone()
            } else {
                self.field.zero()
            }
        })
    }

    /// Bases of `U^s = (e^{-s})-perp` inside `V^s`, in canonical (rref) order.
    pub fn u_bases(&self) -> Result<[Subspace; 2]> {
        let (em, ep) = self
            .e
            .as_ref()
            .ok_or_else(|| Error::Precondition("hyperbolic pair e is required".into()))?;
        // U^- = { v^- : g(v^-, e^+) = 0 }: kernel of the row (G e^+)^T
        let gep = self.g.mat_vec(ep);
        let um = kernel_basis(&Matrix::from_rows(self.field, vec![gep]));
        // U^+ = { v^+ : g(e^-, v^+) = 0 }: kernel of the row (G^T e^-)^T
        let gtem = self.g.transpose().mat_vec(em);
        let up = kernel_basis(&Matrix::from_rows(self.field, vec![gtem]));
        Ok([um, up])
    }
}

/// `zeta(v, w) x = g~(x, w) v - g~(x, v) w` as a matrix on `V~`.
pub fn zeta(fs: &FormSpace, v: &[Scalar], w: &[Scalar]) -> Matrix {
    let n2 = 2 * fs.n;
    assert!(v.len() == n2 && w.len() == n2, "zeta needs vectors in V~");
    let gt = fs.g_tilde();
    let gv = gt.mat_vec(v);
    let gw = gt.mat_vec(w);
    Matrix::from_fn(fs.field, n2, n2, |r, c| {
        let a = v[r].mul(&gw[c]);
        let b = w[r].mul(&gv[c]);
        a.sub(&b)
    })
}

/// Embeds a sign-side vector into `V~` coordinates.
pub fn embed(fs: &FormSpace, sigma: Sign, v: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![fs.field.zero(); 2 * fs.n];
    let off = if sigma == Sign::Minus { 0 } else { fs.n };
    for (i, x) in v.iter().enumerate() {
        out[off + i] = x.clone();
    }
    out
}

/// The algebra of finite-rank skew transformations with a distinguished basis
/// of reduced `zeta` spans and the solver to express arbitrary members.
pub struct SkewAlgebra {
    pub algebra: GradedLieAlgebra,
    pub n: usize,
    rows: Vec<Vec<Scalar>>,
    solver: LinearSolver,
}

impl SkewAlgebra {
    /// Coordinates of an endomorphism of `V~` in the chosen basis.
    pub fn express(&self, m: &Matrix) -> Result<Vec<Scalar>> {
        self.solver
            .solve(&m.flatten())
            .ok_or_else(|| Error::Closure("endomorphism outside the skew algebra".into()))
    }

    pub fn basis_matrix(&self, i: usize) -> Matrix {
        let n2 = 2 * self.n;
        let mut m = Matrix::zero(self.algebra.field, n2, n2);
        for r in 0..n2 {
            for c in 0..n2 {
                m.set(r, c, self.rows[i][r * n2 + c].clone());
            }
        }
        m
    }
}

/// Builds the 3-graded algebra (embedded in a 5-grading as degrees -1, 0, 1)
/// spanned by all `zeta(basis, basis)`.
pub fn build_fso(fs: &FormSpace) -> Result<SkewAlgebra> {
    let field = fs.field;
    let n = fs.n;
    let groups: Vec<(Degree, Vec<(Vec<Scalar>, Vec<Scalar>)>)> = {
        let unit = |s: Sign, i: usize| embed(fs, s, &crate::linalg::unit_vec(field, n, i));
        let mut pairs_minus = Vec::new();
        let mut pairs_plus = Vec::new();
        let mut pairs_zero = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                pairs_minus.push((unit(Sign::Minus, i), unit(Sign::Minus, j)));
                pairs_plus.push((unit(Sign::Plus, i), unit(Sign::Plus, j)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                pairs_zero.push((unit(Sign::Plus, i), unit(Sign::Minus, j)));
            }
        }
        vec![((-1, 0), pairs_minus), ((0, 0), pairs_zero), ((1, 0), pairs_plus)]
    };
    build_skew_from_groups(fs, groups, GradingKind::Z)
}

fn build_skew_from_groups(
    fs: &FormSpace,
    groups: Vec<(Degree, Vec<(Vec<Scalar>, Vec<Scalar>)>)>,
    grading: GradingKind,
) -> Result<SkewAlgebra> {
    let field = fs.field;
    let n2 = 2 * fs.n;
    let flat = n2 * n2;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut degrees: Vec<Degree> = Vec::new();
    let mut joint = RowSpace::new(field, flat);
    for (deg, gens) in groups {
        let mut rs = RowSpace::new(field, flat);
        for (v, w) in gens {
            rs.insert(zeta(fs, &v, &w).flatten());
        }
        for row in rs.into_sorted_rows() {
            if !joint.insert(row.clone()) {
                return Err(Error::Grading(
                    "zeta degree groups are not jointly independent".into(),
                ));
            }
            rows.push(row);
            degrees.push(deg);
        }
    }
    let solver = LinearSolver::new(Matrix::from_rows(field, rows.clone()).transpose());
    let mut algebra = GradedLieAlgebra::new(field, degrees, grading);
    for a in 0..rows.len() {
        for b in (a + 1)..rows.len() {
            let comm = commutator_flat(field, n2, &rows[a], &rows[b]);
            let coords = solver
                .solve(&comm)
                .ok_or_else(|| Error::Closure("commutator left the zeta span".into()))?;
            let terms: Vec<(usize, Scalar)> = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            algebra.set_bracket(a, b, terms);
        }
    }
    Ok(SkewAlgebra { algebra, n: fs.n, rows, solver })
}

fn commutator_flat(field: Field, n: usize, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); n * n];
    for r in 0..n {
        for k in 0..n {
            let ark = &a[r * n + k];
            if !ark.is_zero() {
                for c in 0..n {
                    let x = &b[k * n + c];
                    if !x.is_zero() {
                        out[r * n + c] = out[r * n + c].add(&ark.mul(x));
                    }
                }
            }
            let brk = &b[r * n + k];
            if !brk.is_zero() {
                for c in 0..n {
                    let x = &a[k * n + c];
                    if !x.is_zero() {
                        out[r * n + c] = out[r * n + c].sub(&brk.mul(x));
                    }
                }
            }
        }
    }
    out
}

/// The Jordan pair of finite-rank skew transformations, read off from the
/// 3-graded algebra.
pub fn fskew_pair(fs: &FormSpace) -> Result<TrilinearPair> {
    let sk = build_fso(fs)?;
    crate::kantor::enveloped_pair(&sk.algebra)
}

/// The BC2-grading of the skew algebra induced by `e` (degrees per the zeta
/// spans of `e` and `U`-vectors).
pub fn bc2_on_fso(fs: &FormSpace) -> Result<SkewAlgebra> {
    let (em, ep) = fs
        .e
        .clone()
        .ok_or_else(|| Error::Precondition("bc2_on_fso needs the hyperbolic pair e".into()))?;
    let [um, up] = fs.u_bases()?;
    let e_of = |s: Sign| match s {
        Sign::Minus => embed(fs, Sign::Minus, &em),
        Sign::Plus => embed(fs, Sign::Plus, &ep),
    };
    let u_of = |s: Sign| -> Vec<Vec<Scalar>> {
        let basis = if s == Sign::Minus { &um } else { &up };
        basis
            .basis_rows()
            .iter()
            .map(|r| embed(fs, s, r))
            .collect()
    };
    let mut groups: Vec<(Degree, Vec<(Vec<Scalar>, Vec<Scalar>)>)> = Vec::new();
    for sigma in Sign::BOTH {
        let s = sigma.unit();
        let us = u_of(sigma);
        // zeta(U^s, U^s) at (s, 0)
        let mut g00 = Vec::new();
        for i in 0..us.len() {
            for j in (i + 1)..us.len() {
                g00.push((us[i].clone(), us[j].clone()));
            }
        }
        groups.push(((s, 0), g00));
        // zeta(e^s, U^s) at (s, s)
        groups.push(((s, s), us.iter().map(|u| (e_of(sigma), u.clone())).collect()));
        // zeta(e^s, U^{-s}) at (0, s)
        let un = u_of(sigma.flip());
        groups.push(((0, s), un.iter().map(|u| (e_of(sigma), u.clone())).collect()));
    }
    // zeta(U^-, U^+) + K zeta(e^-, e^+) at (0, 0)
    let mut g0 = Vec::new();
    for a in u_of(Sign::Minus) {
        for b in u_of(Sign::Plus) {
            g0.push((a.clone(), b));
        }
    }
    g0.push((e_of(Sign::Minus), e_of(Sign::Plus)));
    groups.push(((0, 0), g0));
    groups.sort_by_key(|(d, _)| *d);
    let sk = build_skew_from_groups(fs, groups, GradingKind::Z2)?;
    let rep = sk.algebra.grading_check(&crate::bc2::bc2_support());
    if !rep.ok {
        return Err(Error::Grading("induced BC2 grading fails the support check".into()));
    }
    Ok(sk)
}

/// The SP-graded pair of skew transformations (labels from the BC2 grading).
pub fn sp_fskew(fs: &FormSpace) -> Result<TrilinearPair> {
    let sk = bc2_on_fso(fs)?;
    crate::bc2::sp_pair_from_bc2(&sk.algebra)
}

/// The hyperbolic Jordan pair on `(U^-, U^+)` with products
/// `{u, v, w} = g(u, v) w + g(w, v) u`, plus the subpair `U'` spanned by
/// `zeta(U, U) U` and the radical `U''` of `g` restricted to `U'`.
/// Subspaces are in `U`-basis coordinates.
pub struct UPairData {
    pub pair: TrilinearPair,
    pub u_prime: [Subspace; 2],
    pub u_dprime: [Subspace; 2],
}

pub fn u_pair_data(fs: &FormSpace) -> Result<UPairData> {
    let field = fs.field;
    let [um, up] = fs.u_bases()?;
    let dims = [um.dim(), up.dim()];
    // pairing of U^- basis with U^+ basis
    let gu = Matrix::from_fn(field, dims[0], dims[1], |i, j| {
        fs.pair(&um.basis_rows()[i], &up.basis_rows()[j])
    });
    let mut pair = TrilinearPair::new(field, dims[0], dims[1]);
    for sigma in Sign::BOTH {
        let (ds, dn) = (pair.dim(sigma), pair.dim(sigma.flip()));
        let gpair = |i: usize, j: usize| -> Scalar {
            match sigma {
                Sign::Minus => gu.get(i, j).clone(),
                Sign::Plus => gu.get(j, i).clone(),
            }
        };
        for i in 0..ds {
            for j in 0..dn {
                for k in 0..ds {
                    let mut out: Vec<(usize, Scalar)> = Vec::new();
                    let c1 = gpair(i, j);
                    if !c1.is_zero() {
                        out.push((k, c1));
                    }
                    let c2 = gpair(k, j);
                    if !c2.is_zero() {
                        match out.iter_mut().find(|(a, _)| *a == i) {
                            Some((_, c)) => *c = c.add(&c2),
                            None => out.push((i, c2)),
                        }
                    }
                    pair.set_basis_product(sigma, i, j, k, out);
                }
            }
        }
    }
    // U'^s = span of zeta(U^s, U^s) U^{-s}, in U^s coordinates
    let mut u_prime = [Subspace::zero(field, dims[0]), Subspace::zero(field, dims[1])];
    for sigma in Sign::BOTH {
        let us: Vec<Vec<Scalar>> = if sigma == Sign::Minus {
            um.basis_rows().to_vec()
        } else {
            up.basis_rows().to_vec()
        };
        let un: Vec<Vec<Scalar>> = if sigma == Sign::Minus {
            up.basis_rows().to_vec()
        } else {
            um.basis_rows().to_vec()
        };
        let u_sub = if sigma == Sign::Minus { &um } else { &up };
        // full-space solver to express results in the U^s basis
        let basis_mat = Matrix::from_rows(field, us.clone()).transpose();
        let solver = LinearSolver::new(basis_mat);
        let mut rows = Vec::new();
        for (a, ua) in us.iter().enumerate() {
            for ub in us.iter().skip(a + 1) {
                let z = zeta(
                    fs,
                    &embed(fs, sigma, ua),
                    &embed(fs, sigma, ub),
                );
                for w in &un {
                    let img = z.mat_vec(&embed(fs, sigma.flip(), w));
                    // restrict to the sigma block of V~
                    let off = if sigma == Sign::Minus { 0 } else { fs.n };
                    let side: Vec<Scalar> = img[off..off + fs.n].to_vec();
                    let coords = solver
                        .solve(&side)
                        .ok_or_else(|| Error::Closure("zeta image left U".into()))?;
                    rows.push(coords);
                }
            }
        }
        u_prime[sigma.idx()] = Subspace::from_rows(field, u_sub.dim(), rows);
    }
    // U''^s = radical of g on U' (vectors pairing to zero with U'^{-s})
    let mut u_dprime = [Subspace::zero(field, dims[0]), Subspace::zero(field, dims[1])];
    for sigma in Sign::BOTH {
        let own = &u_prime[sigma.idx()];
        let other = &u_prime[sigma.flip().idx()];
        if own.dim() == 0 {
            u_dprime[sigma.idx()] = Subspace::zero(field, dims[sigma.idx()]);
            continue;
        }
        // rows: for each basis w of other: sum_i x_i g(u_i, w) = 0, x in own coords
        let mut rows = Vec::new();
        for w in other.basis_rows() {
            let mut row = Vec::new();
            for u in own.basis_rows() {
                let val = match sigma {
                    Sign::Minus => pair_u(&gu, u, w),
                    Sign::Plus => pair_u(&gu.transpose(), u, w),
                };
                row.push(val);
            }
            rows.push(row);
        }
        let ker = kernel_basis(&Matrix::from_rows(field, rows));
        // lift coords over own basis back to U coordinates
        let mut lifted = Vec::new();
        for combo in ker.basis_rows() {
            let mut v = vec![field.zero(); dims[sigma.idx()]];
            for (t, c) in combo.iter().enumerate() {
                if !c.is_zero() {
                    for (vi, bi) in v.iter_mut().zip(own.basis_rows()[t].iter()) {
                        vi.add_mul_assign(c, bi);
                    }
                }
            }
            lifted.push(v);
        }
        u_dprime[sigma.idx()] = Subspace::from_rows(field, dims[sigma.idx()], lifted);
    }
    Ok(UPairData { pair, u_prime, u_dprime })
}

fn pair_u(gu: &Matrix, u: &[Scalar], w: &[Scalar]) -> Scalar {
    let field = gu.field;
    let mut val = field.zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, wj) in w.iter().enumerate() {
            if wj.is_zero() {
                continue;
            }
            val = val.add(&ui.mul(gu.get(i, j)).mul(wj));
        }
    }
    val
}

/// The pair `(L_{0,1}, L_{0,-1})` inside a BC2-graded skew algebra, with
/// products `[[x, y], z]`; the target of the `lambda` comparison map.
pub fn zero_row_pair(sk: &SkewAlgebra) -> Result<TrilinearPair> {
    let minus = sk.algebra.indices_of_degree((0, 1));
    let plus = sk.algebra.indices_of_degree((0, -1));
    pair_on_components(&sk.algebra, &minus, &plus)
}

/// `lambda^s(u) = s zeta(u^s, e^{-s})` as a pair map from `U` into
/// `zero_row_pair(sk)` (matrix columns over the `U`-bases).
pub fn lambda_map(fs: &FormSpace, sk: &SkewAlgebra) -> Result<crate::pairs::PairMap> {
    let field = fs.field;
    let (em, ep) = fs.e.clone().expect("e required");
    let [um, up] = fs.u_bases()?;
    let minus_idx = sk.algebra.indices_of_degree((0, 1));
    let plus_idx = sk.algebra.indices_of_degree((0, -1));
    let mut cols_minus = Vec::new();
    for u in um.basis_rows() {
        // lambda^-(u) = -zeta(u^-, e^+), landing in L_{0,1}
        let z = zeta(fs, &embed(fs, Sign::Minus, u), &embed(fs, Sign::Plus, &ep));
        let coords = sk.express(&z.scale(&field.from_i64(-1)))?;
        cols_minus.push(restrict(&coords, &minus_idx)?);
    }
    let mut cols_plus = Vec::new();
    for u in up.basis_rows() {
        let z = zeta(fs, &embed(fs, Sign::Plus, u), &embed(fs, Sign::Minus, &em));
        let coords = sk.express(&z)?;
        cols_plus.push(restrict(&coords, &plus_idx)?);
    }
    let to_matrix = |cols: Vec<Vec<Scalar>>, rows: usize| {
        Matrix::from_fn(field, rows, cols.len(), |r, c| cols[c][r].clone())
    };
    Ok(crate::pairs::PairMap::new(
        to_matrix(cols_minus, minus_idx.len()),
        to_matrix(cols_plus, plus_idx.len()),
    ))
}

fn restrict(coords: &[Scalar], idx: &[usize]) -> Result<Vec<Scalar>> {
    for (i, c) in coords.iter().enumerate() {
        if !c.is_zero() && !idx.contains(&i) {
            return Err(Error::Grading("lambda image outside the (0, +-1) rows".into()));
        }
    }
    Ok(idx.iter().map(|&i| coords[i].clone()).collect())
}

/// The double of the triple system of alternating `n x n` matrices with
/// product `ABC + CBA`, on the basis `E_ij - E_ji` (`i < j` lexicographic).
pub fn double_alternating(field: Field, n: usize) -> TrilinearPair {
    let mut basis: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            basis.push((i, j));
        }
    }
    let dim = basis.len();
    let alt = |&(i, j): &(usize, usize)| -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        m.set(i, j, field.one());
        m.set(j, i, field.from_i64(-1));
        m
    };
    let mats: Vec<Matrix> = basis.iter().map(alt).collect();
    let mut tensor: ProductTensor = ProductTensor::new();
    for (a, ma) in mats.iter().enumerate() {
        for (b, mb) in mats.iter().enumerate() {
            for (c, mc) in mats.iter().enumerate() {
                let prod = ma.mat_mul(mb).mat_mul(mc).add(&mc.mat_mul(mb).mat_mul(ma));
                let mut out = Vec::new();
                for (t, &(i, j)) in basis.iter().enumerate() {
                    let coeff = prod.get(i, j).clone();
                    if !coeff.is_zero() {
                        out.push((t, coeff));
                    }
                }
                if !out.is_empty() {
                    tensor.insert((a, b, c), out);
                }
            }
        }
    }
    double_of_triple(field, dim, &tensor, false)
}
