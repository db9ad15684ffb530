//! Independent oracles shared by the integration tests. Nothing here calls
//! the code path it is used to check.
#![allow(dead_code)]

use ghz_core::hv::{ghz_constraints, AssignmentSpace, ContextualModel};
use ghz_core::measure::{DiscreteSignedMeasure, ProbabilityMeasure};
use ghz_core::quantum::{Outcome, StateVector};
use ghz_core::Sign;
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Uniform(ChaCha8Rng);

impl Uniform {
    pub fn new(seed: u64) -> Uniform {
        Uniform(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[0, 1)`.
    pub fn next(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() * n as f64) as usize
    }
}

// ---- quantum ----

type Op2 = [[Complex64; 2]; 2];
pub type Op8 = [[Complex64; 8]; 8];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `cos φ·σx + sin φ·σy`
pub fn sigma(phi: f64) -> Op2 {
    [
        [c(0.0, 0.0), c(phi.cos(), -phi.sin())],
        [c(phi.cos(), phi.sin()), c(0.0, 0.0)],
    ]
}

pub fn identity() -> Op2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

/// `(I + a·σ(φ))/2`
pub fn projector(phi: f64, a: Sign) -> Op2 {
    let s = sigma(phi);
    let i = identity();
    std::array::from_fn(|r| std::array::from_fn(|k| (i[r][k] + s[r][k] * a.as_f64()) * 0.5))
}

pub fn kron3(a: &Op2, b: &Op2, d: &Op2) -> Op8 {
    std::array::from_fn(|r| {
        std::array::from_fn(|s| a[r >> 2][s >> 2] * b[(r >> 1) & 1][(s >> 1) & 1] * d[r & 1][s & 1])
    })
}

pub fn expectation(psi: &StateVector, op: &Op8) -> f64 {
    let v = psi.amplitudes();
    let mut acc = c(0.0, 0.0);
    for r in 0..8 {
        for s in 0..8 {
            acc += v[r].conj() * op[r][s] * v[s];
        }
    }
    acc.re
}

/// Born probabilities as projector expectations, indexed like [`Outcome::index`].
pub fn born_oracle(psi: &StateVector, phi: [f64; 3]) -> [f64; 8] {
    std::array::from_fn(|k| {
        let o = Outcome::from_index(k).0;
        expectation(
            psi,
            &kron3(
                &projector(phi[0], o[0]),
                &projector(phi[1], o[1]),
                &projector(phi[2], o[2]),
            ),
        )
    })
}

// ---- measures ----

/// `sup_E |p(E) − q(E)|` by enumerating all `2^n` events of the joint support.
pub fn brute_force_event_distance(p: &DiscreteSignedMeasure, q: &DiscreteSignedMeasure) -> f64 {
    let mut labels: Vec<&str> = p.atoms().chain(q.atoms()).map(|(l, _)| l).collect();
    labels.sort_unstable();
    labels.dedup();
    assert!(labels.len() <= 20, "enumeration oracle is for small supports");
    let gaps: Vec<f64> = labels.iter().map(|l| p.weight(l) - q.weight(l)).collect();
    let mut best = 0.0f64;
    for event in 0u32..(1 << labels.len()) {
        let gap: f64 = (0..labels.len())
            .filter(|j| event & (1 << j) != 0)
            .map(|j| gaps[j])
            .sum();
        best = best.max(gap.abs());
    }
    best
}

pub fn random_probability(rng: &mut Uniform, points: usize) -> ProbabilityMeasure {
    loop {
        let w: Vec<(String, f64)> = (0..points).map(|j| (j.to_string(), rng.next())).collect();
        if let Ok(p) = ProbabilityMeasure::normalized(w) {
            return p;
        }
    }
}

pub fn random_signed(rng: &mut Uniform, max_points: usize) -> DiscreteSignedMeasure {
    let points = rng.below(max_points + 1);
    let atoms: std::collections::BTreeMap<usize, f64> = (0..points)
        .map(|_| (rng.below(2 * max_points), rng.range(-5.0, 5.0)))
        .collect();
    DiscreteSignedMeasure::from_indexed(atoms).unwrap()
}

// ---- Gaussian affinity ----

fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean) * (x - mean) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// `∫ √(p·q)` by adaptive Simpson over the union of the `μ ± 12σ` windows,
/// pre-split so a narrow peak cannot slip between the first nodes.
pub fn quadrature_affinity(m1: f64, v1: f64, m2: f64, v2: f64) -> f64 {
    let f = |x: f64| (normal_pdf(x, m1, v1) * normal_pdf(x, m2, v2)).sqrt();
    let (s1, s2) = (v1.sqrt(), v2.sqrt());
    let lo = (m1 - 12.0 * s1).min(m2 - 12.0 * s2);
    let hi = (m1 + 12.0 * s1).max(m2 + 12.0 * s2);
    let pieces = 256;
    let tol = 1e-10 / pieces as f64;
    let width = (hi - lo) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let a = lo + k as f64 * width;
            let b = a + width;
            let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
            adaptive(&f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 40)
        })
        .sum()
}

// ---- hidden-variable models ----

/// Direct evaluation of `A(0)B(0)C(0)`-style products on a 6-character label
/// ordered `A:0, A:π/2, B:0, B:π/2, C:0, C:π/2`.
pub fn label_product(label: &str, half_pi: [bool; 3]) -> Sign {
    let chars: Vec<char> = label.chars().collect();
    Sign::product((0..3).map(|party| Sign::from_char(chars[2 * party + usize::from(half_pi[party])]).unwrap()))
}

/// GHZ constraint `k` read straight off a label: the first three need `+1`
/// with `π/2` at party `k`, the fourth needs `−1` with `π/2` everywhere.
pub fn satisfies_ghz(label: &str, k: usize) -> bool {
    match k {
        0..=2 => {
            let mut hp = [false; 3];
            hp[k] = true;
            label_product(label, hp) == Sign::Plus
        }
        _ => label_product(label, [true; 3]) == Sign::Minus,
    }
}

pub fn all_labels() -> Vec<String> {
    (0..64u32)
        .map(|i| {
            (0..6)
                .map(|pos| if i & (1 << (5 - pos)) != 0 { '-' } else { '+' })
                .collect()
        })
        .collect()
}

/// A model on the GHZ settings whose four distributions share one random
/// support inside the set where the first three constraints hold.
pub fn random_common_support_model(rng: &mut Uniform) -> ContextualModel {
    let sigma_plus: Vec<String> = all_labels()
        .into_iter()
        .filter(|l| (0..3).all(|k| satisfies_ghz(l, k)))
        .collect();
    let support: Vec<&String> = loop {
        let pick: Vec<&String> = sigma_plus.iter().filter(|_| rng.next() < 0.5).collect();
        if !pick.is_empty() {
            break pick;
        }
    };
    let distributions = (0..4)
        .map(|_| ProbabilityMeasure::normalized(support.iter().map(|l| (l.as_str(), 0.05 + rng.next()))).unwrap())
        .collect();
    ContextualModel::new(
        ghz_constraints().iter().map(|c| c.settings().to_vec()).collect(),
        distributions,
    )
    .unwrap()
}

pub fn ghz_space() -> AssignmentSpace {
    AssignmentSpace::from_constraints(&ghz_constraints()).unwrap()
}

// ---- linear programming ----

/// Minimum of `c·x` over `{x ≥ 0, A x ≤ b}` by enumerating every basic
/// solution; the caller keeps the region bounded.
pub fn vertex_enumeration_min(cost: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<f64> {
    let n = cost.len();
    // every inequality as a row g·x ≤ h, bounds included
    let mut rows: Vec<(Vec<f64>, f64)> = a.iter().cloned().zip(b.iter().copied()).collect();
    for j in 0..n {
        let mut g = vec![0.0; n];
        g[j] = -1.0;
        rows.push((g, 0.0));
    }
    let mut best: Option<f64> = None;
    let mut choose = vec![0usize; n];
    fn combos(m: usize, n: usize, start: usize, depth: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if depth == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur[depth] = i;
            combos(m, n, i + 1, depth + 1, cur, out);
        }
    }
    let mut all = Vec::new();
    combos(rows.len(), n, 0, 0, &mut choose, &mut all);
    for active in all {
        let mut m: Vec<Vec<f64>> = active.iter().map(|&i| rows[i].0.clone()).collect();
        let mut rhs: Vec<f64> = active.iter().map(|&i| rows[i].1).collect();
        let Some(x) = solve_square(&mut m, &mut rhs) else {
            continue;
        };
        let feasible = rows
            .iter()
            .all(|(g, h)| g.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= h + 1e-9);
        if feasible {
            let value: f64 = cost.iter().zip(&x).map(|(p, q)| p * q).sum();
            best = Some(best.map_or(value, |v: f64| v.min(value)));
        }
    }
    best
}

fn solve_square(m: &mut [Vec<f64>], rhs: &mut [f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let pivot_row = m[col].clone();
        for r in (0..n).filter(|&r| r != col) {
            let factor = m[r][col] / pivot_row[col];
            for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= factor * p;
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}
