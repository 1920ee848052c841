//! Independent re-derivations of values the library computes another way.

use airy_hodge::arith::rational::{int, rat};
use airy_hodge::arith::{series_mul, Polynomial, Rational};
use airy_hodge::asymptotics::{aibi_series, gamma};
use airy_hodge::connection::{build_symk, h1_a1_basis, reduce_to_basis, ModuleElement};
use airy_hodge::moments::s_nk;
use airy_hodge::Limits;
use num_traits::{One, Zero};

/// Dense Gauss-Jordan solve of `a x = b`; returns a solution if consistent.
fn dense_solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

/// Solves `d f / dz + c u_0 = z^m u_0` on `Sym^k` with `f` of z-degree
/// `<= deg`, writing the derivation straight from
/// `d u_a = (k - a) u_{a+1} + a z u_{a-1}`. Returns `c`.
fn coefficient_on_u0(k: usize, m: usize, deg: usize) -> Rational {
    let r = k + 1;
    let unknowns = r * (deg + 1) + 1;
    let eq_deg = deg + 2;
    let row = |a: usize, e: usize| a * (eq_deg + 1) + e;
    let mut mat = vec![vec![Rational::zero(); unknowns]; r * (eq_deg + 1)];
    for a in 0..r {
        for d in 0..=deg {
            let col = a * (deg + 1) + d;
            // d/dz (z^d u_a) = d z^{d-1} u_a + z^d (k-a) u_{a+1} + z^{d+1} a u_{a-1}
            if d > 0 {
                mat[row(a, d - 1)][col] += int(d as i64);
            }
            if a < k {
                mat[row(a + 1, d)][col] += int((k - a) as i64);
            }
            if a > 0 {
                mat[row(a - 1, d + 1)][col] += int(a as i64);
            }
        }
    }
    let c_col = unknowns - 1;
    mat[row(0, 0)][c_col] = Rational::one();
    let mut rhs = vec![Rational::zero(); r * (eq_deg + 1)];
    rhs[row(0, m)] = Rational::one();
    let x = dense_solve(mat, rhs).expect("z^m u_0 lies in span(u_0) + image");
    x[c_col].clone()
}

#[test]
fn reduction_of_z3_u0_matches_dense_solve() {
    let oracle = coefficient_on_u0(4, 3, 12);
    // Frozen from the dense oracle above.
    assert_eq!(oracle, rat(5, 16));
    let m = build_symk(2, 4, &Rational::zero()).unwrap();
    let basis = h1_a1_basis(4).unwrap();
    let c = ModuleElement::monomial(5, 0, Rational::one(), 3);
    let coords = reduce_to_basis(&c, &basis, &m, &Limits::default()).unwrap();
    assert_eq!(coords, vec![oracle]);
}

#[test]
fn reductions_for_several_k_match_dense_solve() {
    for (k, deg) in [(3usize, 5usize), (4, 6), (5, 7), (6, 9)] {
        let m = build_symk(2, k, &Rational::zero()).unwrap();
        let basis = h1_a1_basis(k).unwrap();
        if basis.len() != 1 {
            continue;
        }
        let c = ModuleElement::monomial(k + 1, 0, Rational::one(), deg);
        let coords = reduce_to_basis(&c, &basis, &m, &Limits::default()).unwrap();
        assert_eq!(coords, vec![coefficient_on_u0(k, deg, deg + 8)], "k={k}");
    }
}

/// `S_{n,k}` by floating-point evaluation of `sum a_i zeta^i`.
fn s_nk_numeric(n: usize, k: usize) -> usize {
    fn rec(n: usize, left: usize, i: usize, re: f64, im: f64, count: &mut usize) {
        if i == n - 1 {
            let t = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
            let (x, y) = (re + left as f64 * t.cos(), im + left as f64 * t.sin());
            if x.abs() < 1e-9 && y.abs() < 1e-9 {
                *count += 1;
            }
            return;
        }
        let t = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
        for a in 0..=left {
            rec(n, left - a, i + 1, re + a as f64 * t.cos(), im + a as f64 * t.sin(), count);
        }
    }
    let mut count = 0;
    rec(n, k, 0, 0.0, 0.0, &mut count);
    count
}

#[test]
fn s_nk_matches_numeric_roots_of_unity() {
    for n in 2..=8 {
        for k in 0..=8 {
            assert_eq!(s_nk(n, k).unwrap(), s_nk_numeric(n, k), "n={n}, k={k}");
        }
    }
}

#[test]
fn aibi_low_coefficients() {
    // From the recurrence of f''' - 4 z f' - 2 f = 0 at infinity by hand.
    let s = aibi_series(3).unwrap();
    assert_eq!(s.coeffs, vec![int(1), rat(5, 32), rat(1155, 2048)]);
}

#[test]
fn gamma_matches_repeated_products() {
    let base = aibi_series(12).unwrap();
    for k in [4usize, 6, 8, 12] {
        let mut acc = base.clone();
        for _ in 1..k / 2 {
            acc = series_mul(&acc, &base).unwrap();
        }
        let g = gamma(k, 12).unwrap();
        assert_eq!(g.values, acc.coeffs, "k={k}");
        assert_eq!(g.offset, acc.offset);
    }
    assert_eq!(gamma(4, 3).unwrap().values, vec![int(1), rat(5, 16), rat(295, 256)]);
}

#[test]
fn polynomial_eval_agrees_with_naive_sum() {
    let p = Polynomial::from_i64(&[3, 0, -2, 0, 0, 1]);
    let x = rat(-3, 2);
    let naive: Rational = p.to_dense().iter().enumerate().map(|(i, c)| c * {
        let mut t = Rational::one();
        for _ in 0..i {
            t *= &x;
        }
        t
    }).sum();
    assert_eq!(p.eval(&x), naive);
}
