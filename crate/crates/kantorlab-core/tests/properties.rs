//! Property tests for the exact linear algebra layer and the basic pair
//! transformations, over both ground fields.

use kantorlab_core::field::{Field, Scalar};
use kantorlab_core::linalg::{kernel_basis, rref, Matrix, Subspace};
use kantorlab_core::pairs::{Sign, TrilinearPair};
use proptest::prelude::*;

fn small_scalar(field: Field, raw: i64) -> Scalar {
    field.from_i64(raw % 7)
}

fn arb_matrix(field: Field) -> impl Strategy<Value = Matrix> {
    (1usize..5, 1usize..5).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-20i64..20, r * c).prop_map(move |vals| {
            Matrix::from_fn(field, r, c, |i, j| small_scalar(field, vals[i * c + j]))
        })
    })
}

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Q), Just(Field::Gf(7)), Just(Field::Gf(11))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent((f, seed) in fields().prop_flat_map(|f| (Just(f), arb_matrix(f)))) {
        let _ = f;
        let m = seed;
        let (r1, rank1, piv1) = rref(&m);
        let (r2, rank2, piv2) = rref(&r1);
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(rank1, rank2);
        prop_assert_eq!(piv1, piv2);
    }

    #[test]
    fn rank_nullity((f, seed) in fields().prop_flat_map(|f| (Just(f), arb_matrix(f)))) {
        let _ = f;
        let m = seed;
        let (_, rank, _) = rref(&m);
        let ker = kernel_basis(&m);
        prop_assert_eq!(rank + ker.dim(), m.cols);
        // every kernel basis vector is annihilated
        for v in ker.basis_rows() {
            let out = m.mat_vec(v);
            prop_assert!(out.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn modular_dimension_law(
        (f, a, b) in fields().prop_flat_map(|f| (Just(f), arb_matrix(f), arb_matrix(f)))
    ) {
        // force a common ambient dimension
        let n = 4usize;
        let pad = |m: &Matrix| {
            let rows: Vec<Vec<Scalar>> = (0..m.rows)
                .map(|i| {
                    (0..n)
                        .map(|j| if j < m.cols { m.get(i, j).clone() } else { f.zero() })
                        .collect()
                })
                .collect();
            Subspace::from_rows(f, n, rows)
        };
        let sa = pad(&a);
        let sb = pad(&b);
        let sum = sa.sum(&sb).unwrap();
        let cap = sa.intersect(&sb).unwrap();
        prop_assert_eq!(sa.dim() + sb.dim(), sum.dim() + cap.dim());
        prop_assert!(sum.contains(&sa).unwrap());
        prop_assert!(sa.contains(&cap).unwrap());
    }

    #[test]
    fn opposite_is_an_involution(entries in proptest::collection::vec(
        (0usize..2, 0usize..2, 0usize..2, 0usize..2, -5i64..5), 0..12))
    {
        let f = Field::Q;
        let mut p = TrilinearPair::new(f, 2, 2);
        for (i, j, k, a, c) in entries {
            p.add_product_term(Sign::Plus, i, j, k, a, f.from_i64(c));
            p.add_product_term(Sign::Minus, k, i, j, a, f.from_i64(c + 1));
        }
        p.sp_labels = Some([vec![0, 1], vec![1, 0]]);
        let back = p.opposite_pair().opposite_pair();
        prop_assert_eq!(p, back);
    }

    #[test]
    fn triple_product_is_trilinear(entries in proptest::collection::vec(
        (0usize..2, 0usize..2, 0usize..2, 0usize..2, -5i64..5), 1..10),
        x1 in -3i64..3, x2 in -3i64..3, y1 in -3i64..3, z1 in -3i64..3)
    {
        let f = Field::Q;
        let mut p = TrilinearPair::new(f, 2, 2);
        for (i, j, k, a, c) in entries {
            p.add_product_term(Sign::Plus, i, j, k, a, f.from_i64(c));
        }
        let u = vec![f.from_i64(x1), f.from_i64(x2)];
        let v = vec![f.from_i64(x2), f.from_i64(-x1)];
        let y = vec![f.from_i64(y1), f.from_i64(1)];
        let z = vec![f.from_i64(z1), f.from_i64(2)];
        let sum: Vec<Scalar> = u.iter().zip(v.iter()).map(|(a, b)| a.add(b)).collect();
        let lhs = p.triple_product(Sign::Plus, &sum, &y, &z).unwrap();
        let r1 = p.triple_product(Sign::Plus, &u, &y, &z).unwrap();
        let r2 = p.triple_product(Sign::Plus, &v, &y, &z).unwrap();
        let rhs: Vec<Scalar> = r1.iter().zip(r2.iter()).map(|(a, b)| a.add(b)).collect();
        prop_assert_eq!(lhs, rhs);
    }
}
