//! Fibonacci polynomials F_n(x) and bivariate Fibonacci polynomials u_n(x, y).
//!
//! Values come from the three-term recurrences. The closed forms
//! (μⁿ − νⁿ)/(μ − ν) are kept for testing only: they cancel badly for large n.

use num_complex::Complex64;

/// F_0 = 0, F_1 = 1, F_{n+2} = x F_{n+1} + F_n.
pub fn fib_poly(n: usize, x: f64) -> f64 {
    bivariate_fib(n, x, 1.0)
}

/// u_0 = 0, u_1 = 1, u_{n+2} = x u_{n+1} + y u_n.
pub fn bivariate_fib(n: usize, x: f64, y: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 1..n {
        let next = x * cur + y * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of u_0 … u_n.
pub fn bivariate_fib_table(n: usize, x: f64, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    if n >= 1 {
        out.push(1.0);
    }
    for k in 2..=n {
        out.push(x * out[k - 1] + y * out[k - 2]);
    }
    out
}

/// (μⁿ − νⁿ)/(μ − ν) with μ, ν = (x ± √(x² + 4y))/2, in complex arithmetic.
pub fn bivariate_fib_closed_form(n: usize, x: f64, y: f64) -> f64 {
    let disc = Complex64::new(x * x + 4.0 * y, 0.0).sqrt();
    let mu = (x + disc) / 2.0;
    let nu = (x - disc) / 2.0;
    ((mu.powu(n as u32) - nu.powu(n as u32)) / (mu - nu)).re
}

pub fn fib_poly_closed_form(n: usize, x: f64) -> f64 {
    bivariate_fib_closed_form(n, x, 1.0)
}

/// The coefficient polynomial of the second-order recurrence written as a
/// binomial sum, Σ_j C(n−1−j, j) p^{n−1−2j} q^j.
pub fn fib_binomial_sum(n: usize, p: f64, q: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut s = 0.0;
    let mut j = 0;
    while 2 * j < n {
        let mut binom = 1.0;
        for i in 0..j {
            binom = binom * (n - 1 - j - i) as f64 / (i + 1) as f64;
        }
        s += binom * p.powi((n - 1 - 2 * j) as i32) * q.powi(j as i32);
        j += 1;
    }
    s
}
