//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use airy_hodge::arith::rational::{from_usize, rat};
use airy_hodge::arith::Rational;
use airy_hodge::asymptotics::{aibi_series, aibi_series_ode_oracle, gamma, mid_basis, mid_quotient_index};
use airy_hodge::connection::{build_symk, class_rank, h1_a1_basis, h1_dim_bruteforce, kprime, reduce_to_basis, Space};
use airy_hodge::hodge::{
    g_levels, hodge_numbers, tilde_mid_hodge, twisted_eta_level, twisted_omega_level, yu_pole_level, GFamily,
    HodgeTable, PoleVariant,
};
use airy_hodge::connection::omega_level;
use airy_hodge::moments::{h1_dims, mk_invariants, rho_domain, rho_preimage, s_nk};
use airy_hodge::Limits;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn pairs(t: &HodgeTable) -> Vec<(Rational, Rational)> {
    t.entries.iter().map(|x| (x.p.clone(), x.q.clone())).collect()
}

fn r(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn hodge_tables() -> Outcome {
    for k in 2..=40usize {
        let t = hodge_numbers(k).map_err(e)?;
        let kp = kprime(k);
        let closed_all = if k % 2 == 1 { kp + 1 } else { kp };
        let closed_mid = if k % 4 == 0 { closed_all - 1 } else { closed_all };
        let dims = h1_dims(2, k).map_err(e)?;
        ensure(t.full.is_symmetric() && t.mid.is_symmetric(), || format!("k={k}: asymmetric"))?;
        ensure(t.full.entries.iter().all(|x| x.h == 1), || format!("k={k}: some h != 1"))?;
        ensure(t.full.total() == closed_all && dims.all == closed_all, || {
            format!("k={k}: total {} vs {closed_all}", t.full.total())
        })?;
        ensure(t.mid.total() == closed_mid && dims.mid == closed_mid, || {
            format!("k={k}: mid total {} vs {closed_mid}", t.mid.total())
        })?;
    }
    let golden: [(usize, Vec<(Rational, Rational)>); 5] = [
        (3, vec![(r(5, 3), r(7, 3)), (r(7, 3), r(5, 3))]),
        (4, vec![(r(3, 1), r(3, 1))]),
        (5, vec![(r(7, 3), r(11, 3)), (r(3, 1), r(3, 1)), (r(11, 3), r(7, 3))]),
        (6, vec![(r(8, 3), r(13, 3)), (r(13, 3), r(8, 3))]),
        (8, vec![(r(10, 3), r(17, 3)), (r(5, 1), r(5, 1)), (r(17, 3), r(10, 3))]),
    ];
    for (k, want) in golden {
        let t = hodge_numbers(k).map_err(e)?;
        ensure(pairs(&t.full) == want, || format!("k={k}: golden mismatch"))?;
    }
    ensure(hodge_numbers(4).map_err(e)?.mid.entries.is_empty(), || "k=4 mid not empty".into())?;
    Ok("k = 2..40 symmetric, all ones, totals match; goldens k = 3,4,5,6,8".into())
}

fn oracle_n2() -> Outcome {
    let limits = Limits::default();
    for k in 1..=20usize {
        let m = build_symk(2, k, &Rational::zero()).map_err(e)?;
        let bf = h1_dim_bruteforce(&m, Space::A1, &limits).map_err(e)?.dim;
        let closed = h1_dims(2, k).map_err(e)?.all;
        ensure(bf == closed, || format!("A1 k={k}: brute force {bf}, closed form {closed}"))?;
    }
    for k in 1..=14usize {
        let kp = kprime(k);
        let want = if k % 2 == 1 { 3 * (kp + 1) } else { k + kp + 1 };
        for rho in [Rational::zero(), r(1, 2)] {
            let m = build_symk(2, k, &rho).map_err(e)?;
            let bf = h1_dim_bruteforce(&m, Space::Gm, &limits).map_err(e)?.dim;
            ensure(bf == want, || format!("G_m k={k} rho={rho}: brute force {bf}, expected {want}"))?;
        }
    }
    Ok("A1 k = 1..20 and G_m k = 1..14 (both twists) agree".into())
}

fn oracle_general_n() -> Outcome {
    let limits = Limits::default();
    let cases = (2..=8usize).map(|k| (3usize, k)).chain((2..=6).map(|k| (4, k)));
    for (n, k) in cases {
        let m = build_symk(n, k, &Rational::zero()).map_err(e)?;
        let bf = h1_dim_bruteforce(&m, Space::A1, &limits).map_err(e)?.dim;
        let s = s_nk(n, k).map_err(e)?;
        let binom = airy_hodge::arith::rational::binomial((k + n - 1) as u64, k as u64);
        let formula = Rational::from_integer(binom) / from_usize(n) - r((n + 1) as i64, n as i64) * from_usize(s);
        ensure(formula == from_usize(bf), || format!("n={n} k={k}: brute force {bf}, formula {formula}"))?;
    }
    Ok("n = 3, k = 2..8 and n = 4, k = 2..6 agree".into())
}

fn series() -> Outcome {
    let a = aibi_series(40).map_err(e)?;
    let b = aibi_series_ode_oracle(40).map_err(e)?;
    ensure(a == b, || "product series and ODE solution differ".into())?;
    ensure(a.coeffs[1] == r(5, 32), || format!("coefficient 1 is {}", a.coeffs[1]))?;
    for k in [4usize, 8, 12, 16] {
        let g = gamma(k, 30).map_err(e)?;
        ensure(g.values.len() == 30, || format!("k={k}: {} terms", g.values.len()))?;
        ensure(g.values[0].is_one(), || format!("k={k}: leading value {}", g.values[0]))?;
        ensure(g.values.iter().all(|v| *v > Rational::zero()), || format!("k={k}: nonpositive value"))?;
    }
    Ok("40 terms agree, e_1 = 5/32, gamma positive for k = 4,8,12,16".into())
}

fn filtration() -> Outcome {
    for k in (4..=40usize).step_by(2) {
        let t = tilde_mid_hodge(k).map_err(e)?;
        ensure(t.is_symmetric(), || format!("k={k}: tilde table not symmetric"))?;
        let bound = from_usize(k / 2 + 1);
        let tilde = t.p_multiset();
        let g = g_levels(k, GFamily::Tilde).map_err(e)?.counts();
        let levels: std::collections::BTreeSet<&Rational> =
            tilde.keys().chain(g.keys()).filter(|l| **l > bound).collect();
        for l in levels {
            let a = tilde.get(l).copied().unwrap_or(0);
            let b = g.get(l).copied().unwrap_or(0);
            ensure(a == b, || format!("k={k} level {l}: tilde {a}, G {b}"))?;
        }
    }
    for k in (3..=39usize).step_by(2) {
        let t = hodge_numbers(k).map_err(e)?.full;
        let g = g_levels(k, GFamily::Ai).map_err(e)?.counts();
        ensure(t.p_multiset() == g, || format!("k={k}: Hodge levels differ from G-levels"))?;
    }
    Ok("even k = 4..40 above k/2+1 and odd k = 3..39 exact".into())
}

fn mid() -> Outcome {
    let limits = Limits::default();
    for k in [4usize, 8, 12, 16] {
        let b = mid_basis(k).map_err(e)?;
        let dims = h1_dims(2, k).map_err(e)?;
        ensure(b.len() == dims.mid, || format!("k={k}: {} classes, mid dim {}", b.len(), dims.mid))?;
        let m = build_symk(2, k, &Rational::zero()).map_err(e)?;
        let rank = class_rank(&m, Space::Mid, &b.classes, &limits).map_err(e)?;
        ensure(rank == b.len(), || format!("k={k}: classes span only {rank}"))?;
        for (i, c) in b.classes.iter().enumerate() {
            let x = reduce_to_basis(c, &b, &m, &limits).map_err(e)?;
            let unit = (0..b.len()).all(|j| if j == i { x[j].is_one() } else { x[j].is_zero() });
            ensure(unit, || format!("k={k}: class {i} does not reduce to a unit vector"))?;
        }
        let q = mid_quotient_index(k).expect("4 | k");
        let anchor = &h1_a1_basis(k).map_err(e)?.classes[q - 1];
        ensure(reduce_to_basis(anchor, &b, &m, &limits).is_err(), || {
            format!("k={k}: omega_{q} lies in the span of the middle basis")
        })?;
        let mut with_anchor = b.classes.clone();
        with_anchor.push(anchor.clone());
        let full = class_rank(&m, Space::A1, &with_anchor, &limits).map_err(e)?;
        let bf = h1_dim_bruteforce(&m, Space::A1, &limits).map_err(e)?.dim;
        ensure(full == b.len() + 1 && full == bf, || format!("k={k}: span with omega_{q} is {full}, H^1 is {bf}"))?;
    }
    Ok("k = 4,8,12,16: sizes match, independent, codimension one".into())
}

fn pole_orders() -> Outcome {
    for k in (4..=40usize).step_by(2) {
        let kp = kprime(k);
        let mut cases: Vec<(usize, usize, PoleVariant, Rational)> = Vec::new();
        cases.extend((1..=k / 4).map(|i| (i, 0, PoleVariant::Plain, omega_level(k, i))));
        cases.extend((1..=kp / 2).map(|i| (i, 0, PoleVariant::Twisted, twisted_omega_level(k, i))));
        cases.extend((0..=kp).map(|j| (0, j, PoleVariant::Twisted, twisted_eta_level(k, j))));
        for (rr, nu, v, want) in cases {
            let y = yu_pole_level(k, rr, nu, v).map_err(e)?;
            ensure(y.admissible, || format!("k={k} r={rr} nu={nu} {v:?}: not admissible"))?;
            ensure(y.f_level == want, || format!("k={k} r={rr} nu={nu} {v:?}: level {} vs {want}", y.f_level))?;
        }
        // The three explicit forms of the level formulas.
        let w = from_usize(k + 1);
        ensure(omega_level(k, 1) == &w - r((k + 2) as i64, 3), || "omega level".into())?;
        ensure(twisted_omega_level(k, 1) == &w - r((k + 3) as i64, 3), || "omega^- level".into())?;
        ensure(twisted_eta_level(k, 0) == &w - r((k + 1) as i64, 3), || "eta^- level".into())?;
    }
    Ok("even k = 4..40: all required forms admissible with matching levels".into())
}

fn fourier_side() -> Outcome {
    for k in (2..=40usize).step_by(2) {
        let mut total_domain = 0;
        let mut nu_sum = 0;
        for eps in 0..3 {
            let m = mk_invariants(k, eps).map_err(e)?;
            let count = (0..=k).filter(|j| (k + j) % 3 != (3 - eps) % 3).count();
            ensure(m.rank == count, || format!("k={k} eps={eps}: rank {} vs count {count}", m.rank))?;
            let dom = rho_domain(k, eps).count();
            ensure(dom == m.rank, || format!("k={k} eps={eps}: domain {dom} vs rank {}", m.rank))?;
            let mass: usize = (0..=k as i64 + 2).map(|p| rho_preimage(k, eps, p)).sum();
            ensure(mass == m.rank, || format!("k={k} eps={eps}: graded mass {mass}"))?;
            let pts: Vec<Rational> = (0..=k).map(|j| r(2 * (2 * j as i64 - k as i64), 3)).collect();
            ensure(m.singular_points == pts, || format!("k={k} eps={eps}: singular points"))?;
            let (psi, phi) = if eps == 0 { (m.rank, 1) } else { (m.rank - 1, 0) };
            ensure((m.psi_unit_dim, m.phi_unit_dim) == (psi, phi), || format!("k={k} eps={eps}: psi/phi"))?;
            total_domain += dom;
            nu_sum += m.nu;
        }
        ensure(total_domain == 2 * (k + 1), || format!("k={k}: domains sum to {total_domain}"))?;
        ensure(nu_sum == k + 1, || format!("k={k}: nu sum {nu_sum}"))?;
    }
    Ok("even k = 2..40: rank, singular points, nu partition, graded mass".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 8] = [
        ("1 Hodge tables", hodge_tables, Some(Duration::from_secs(1))),
        ("2 brute force vs closed form, n = 2", oracle_n2, Some(Duration::from_secs(300))),
        ("3 brute force vs closed form, n = 3, 4", oracle_general_n, Some(Duration::from_secs(600))),
        ("4 series double derivation", series, Some(Duration::from_secs(30))),
        ("5 filtration consistency", filtration, None),
        ("6 middle basis", mid, None),
        ("7 pole-order admissibility", pole_orders, None),
        ("8 Fourier-side invariants", fourier_side, None),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let mut outcome = f();
        let took = start.elapsed();
        if let (Ok(_), Some(b)) = (&outcome, budget) {
            if took > b {
                outcome = Err(format!("took {took:.2?}, budget {b:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{took:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{took:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
