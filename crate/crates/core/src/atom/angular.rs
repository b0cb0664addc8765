//! Angular-momentum coupling coefficients.
//!
//! All angular momenta are passed as *doubled* integers (`2j`, `2m`) so that
//! half-integer spins such as `J = 1/2` or `I = 3/2` are represented exactly.

fn factorial(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `n/2` as an integer; `n` must be even.
fn half(n: i64) -> i64 {
    debug_assert!(n % 2 == 0, "odd doubled quantity {n}");
    n / 2
}

fn triangle_ok(a: i64, b: i64, c: i64) -> bool {
    c <= a + b && c >= (a - b).abs() && (a + b + c) % 2 == 0
}

/// Triangle coefficient Δ(abc) for doubled arguments.
fn delta(a: i64, b: i64, c: i64) -> f64 {
    (factorial(half(a + b - c)) * factorial(half(a - b + c)) * factorial(half(-a + b + c))
        / factorial(half(a + b + c) + 1))
    .sqrt()
}

/// Clebsch-Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩` (Condon-Shortley phase),
/// arguments doubled.
pub fn clebsch_gordan(j1: i64, m1: i64, j2: i64, m2: i64, j: i64, m: i64) -> f64 {
    if m1 + m2 != m
        || m1.abs() > j1
        || m2.abs() > j2
        || m.abs() > j
        || (j1 + m1) % 2 != 0
        || (j2 + m2) % 2 != 0
        || (j + m) % 2 != 0
        || !triangle_ok(j1, j2, j)
    {
        return 0.0;
    }
    let pre = ((j + 1) as f64
        * factorial(half(j + j1 - j2))
        * factorial(half(j - j1 + j2))
        * factorial(half(j1 + j2 - j))
        / factorial(half(j1 + j2 + j) + 1))
    .sqrt()
        * (factorial(half(j + m))
            * factorial(half(j - m))
            * factorial(half(j1 - m1))
            * factorial(half(j1 + m1))
            * factorial(half(j2 - m2))
            * factorial(half(j2 + m2)))
        .sqrt();

    let kmin = 0.max(half(j2 - j - m1)).max(half(j1 - j + m2));
    let kmax = half(j1 + j2 - j).min(half(j1 - m1)).min(half(j2 + m2));
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let den = factorial(k)
            * factorial(half(j1 + j2 - j) - k)
            * factorial(half(j1 - m1) - k)
            * factorial(half(j2 + m2) - k)
            * factorial(half(j - j2 + m1) + k)
            * factorial(half(j - j1 - m2) + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / den;
    }
    pre * sum
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}` (Racah formula), arguments doubled.
pub fn wigner_6j(j1: i64, j2: i64, j3: i64, j4: i64, j5: i64, j6: i64) -> f64 {
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle_ok(a, b, c)) {
        return 0.0;
    }
    let pre: f64 = triads.iter().map(|&(a, b, c)| delta(a, b, c)).product();

    let a1 = half(j1 + j2 + j3);
    let a2 = half(j1 + j5 + j6);
    let a3 = half(j4 + j2 + j6);
    let a4 = half(j4 + j5 + j3);
    let b1 = half(j1 + j2 + j4 + j5);
    let b2 = half(j2 + j3 + j5 + j6);
    let b3 = half(j3 + j1 + j6 + j4);

    let tmin = a1.max(a2).max(a3).max(a4);
    let tmax = b1.min(b2).min(b3);
    let mut sum = 0.0;
    for t in tmin..=tmax {
        let den = factorial(t - a1)
            * factorial(t - a2)
            * factorial(t - a3)
            * factorial(t - a4)
            * factorial(b1 - t)
            * factorial(b2 - t)
            * factorial(b3 - t);
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * factorial(t + 1) / den;
    }
    pre * sum
}
