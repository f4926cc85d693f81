//! Weight-space dimensions, singular vectors and the matrix of `E12`, each
//! checked against an independent closed-form oracle.

use sl3theta_core::branching::singular_dimension;
use sl3theta_core::exactalg::{int, rat, Rational};
use sl3theta_core::verma::{Generator, ModuleSpec, Operator, Root, VermaModule};

fn samples() -> Vec<(Rational, Rational)> {
    vec![(rat(7, 3), rat(5, 7)), (rat(11, 5), rat(-3, 7)), (rat(13, 4), rat(9, 11))]
}

fn weights(max: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=max).flat_map(|s| (0..=s).map(move |n| (n, s - n)))
}

#[test]
fn borel_singular_dimensions() {
    for (l1, l2) in samples() {
        let module = VermaModule::new(ModuleSpec::borel(l1, l2, 10));
        for (n, m) in weights(10) {
            let a12 = singular_dimension(&module, Root::A12, n, m).unwrap();
            let a23 = singular_dimension(&module, Root::A23, n, m).unwrap();
            let a13 = singular_dimension(&module, Root::A13, n, m).unwrap();
            assert_eq!(a12, usize::from(n <= m), "A12 at ({n}, {m})");
            assert_eq!(a23, usize::from(m <= n), "A23 at ({n}, {m})");
            assert_eq!(a13, 1, "A13 at ({n}, {m})");
        }
    }
}

#[test]
fn borel_dimensions() {
    let module = VermaModule::new(ModuleSpec::borel(rat(7, 3), rat(5, 7), 12));
    for (n, m) in weights(12) {
        assert_eq!(module.weight_dim(n, m), n.min(m) + 1);
    }
}

/// Case formulas in the two regions `n > m` (one step of α12 plus `m`
/// steps of α13) and `n ≤ m` (`l = m - n` steps of α23 plus `n` of α13).
fn parabolic_dim(l2: usize, n: usize, m: usize) -> usize {
    if n > m {
        let k = m;
        if k <= l2 {
            k + 1
        } else {
            l2 + 1
        }
    } else {
        let (l, k) = (m - n, n);
        if l > l2 {
            0
        } else if k <= l2 - l {
            k + 1
        } else {
            l2 - l + 1
        }
    }
}

#[test]
fn parabolic_dimensions() {
    for l2 in 0..=3u32 {
        let module = VermaModule::new(ModuleSpec::parabolic(rat(7, 3), l2, 12));
        for (n, m) in weights(12) {
            assert_eq!(module.weight_dim(n, m), parabolic_dim(l2 as usize, n, m), "λ2 = {l2}, ({n}, {m})");
        }
    }
}

/// `E12 x_{k+1} = (n-k)(λ1+m+1-k-n) y_{k+1} - k y_k` with
/// `x_{k+1} = E21^{n-k} E32^{m-k} E31^k v` and `y` the same words with one
/// fewer `E21`.
fn hand_matrix(l1: &Rational, n: usize, m: usize) -> Vec<Vec<Rational>> {
    let cols = n.min(m) + 1;
    let rows = (n - 1).min(m) + 1;
    let mut out = vec![vec![int(0); cols]; rows];
    for k in 0..cols {
        if k < rows {
            let a = int((n - k) as i64);
            let b = l1 + int(m as i64 + 1 - k as i64 - n as i64);
            out[k][k] = a * b;
        }
        if k >= 1 {
            out[k - 1][k] = int(-(k as i64));
        }
    }
    out
}

#[test]
fn e12_matches_hand_formula() {
    for (l1, l2) in samples() {
        let module = VermaModule::new(ModuleSpec::borel(l1.clone(), l2, 8));
        for (n, m) in weights(8).filter(|&(n, _)| n >= 1) {
            let mat = module.operator_matrix(Operator::Gen(Generator::E12), n, m).unwrap();
            let expected = hand_matrix(&l1, n, m);
            assert_eq!(mat.rows(), expected.len());
            for (r, row) in expected.iter().enumerate() {
                assert_eq!(mat.row(r), row.as_slice(), "({n}, {m}) row {r} at λ1 = {l1}");
            }
        }
    }
}

#[test]
fn second_row_sign_in_the_bijective_regime() {
    // for m < n the displayed coefficient of y1 in E12 x2 reads +1; the
    // module gives -1, in line with the general row
    let module = VermaModule::new(ModuleSpec::borel(rat(7, 3), rat(5, 7), 8));
    let mat = module.operator_matrix(Operator::Gen(Generator::E12), 3, 2).unwrap();
    assert_eq!(mat.get(0, 1), &int(-1));
}
