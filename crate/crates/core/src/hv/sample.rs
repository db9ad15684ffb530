//! Monte Carlo sampling from a contextual model.
//!
//! Draw `i` of a run always uses the same position of one ChaCha8 stream,
//! selected by `(seed, setting index)`: the generator is seeked to word
//! `2·i` and one `u64` is consumed. Results are therefore identical for any
//! split of the `n` draws into chunks, which are processed in parallel.

use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Constraint, ContextualModel, HvError};
use crate::phase::Phase;
use crate::sign::{parse_sign_string, sign_string, Sign};

const DEFAULT_CHUNK: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleCounts {
    pub settings: Vec<Phase>,
    pub n: u64,
    pub seed: u64,
    /// Counts per assignment label, over the distribution's support.
    pub assignment_counts: BTreeMap<String, u64>,
    /// Counts per joint outcome at `settings`, over the reachable outcomes.
    pub outcome_counts: BTreeMap<String, u64>,
}

impl SampleCounts {
    pub fn outcome_frequency(&self, outcome: &str) -> f64 {
        self.outcome_counts.get(outcome).copied().unwrap_or(0) as f64 / self.n as f64
    }

    /// Empirical `P(product of outcomes = sign)`.
    pub fn product_frequency(&self, sign: Sign) -> f64 {
        let hits: u64 = self
            .outcome_counts
            .iter()
            .filter(|(o, _)| parse_sign_string(o).map(Sign::product) == Some(sign))
            .map(|(_, &c)| c)
            .sum();
        hits as f64 / self.n as f64
    }

    /// `outcome,count` rows in outcome order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("outcome,count\n");
        for (outcome, count) in &self.outcome_counts {
            out.push_str(&format!("{outcome},{count}\n"));
        }
        out
    }
}

fn unit_interval(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n` i.i.d. draws from the model's distribution at `settings`.
pub fn sample(m: &ContextualModel, settings: &[Phase], n: u64, seed: u64) -> Result<SampleCounts, HvError> {
    sample_chunked(m, settings, n, seed, DEFAULT_CHUNK)
}

/// As [`sample`], with an explicit chunk size for the parallel split.
pub fn sample_chunked(
    m: &ContextualModel,
    settings: &[Phase],
    n: u64,
    seed: u64,
    chunk: u64,
) -> Result<SampleCounts, HvError> {
    if n == 0 {
        return Err(HvError::NoSamples);
    }
    let idx = m.require_index(settings)?;
    let space = m.space();
    let positions = space.positions(&Constraint::new(settings.to_vec(), Sign::Plus)?)?;

    let atoms: Vec<(&str, f64)> = m.distributions()[idx].atoms().filter(|&(_, w)| w > 0.0).collect();
    let mut cumulative = Vec::with_capacity(atoms.len());
    let mut acc = 0.0;
    for &(_, w) in &atoms {
        acc += w;
        cumulative.push(acc);
    }
    let total = acc;
    let last = atoms.len() - 1;

    let chunk = chunk.max(1);
    let starts: Vec<u64> = (0..n.div_ceil(chunk)).map(|k| k * chunk).collect();
    let per_atom = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk).min(n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            rng.set_word_pos(2 * u128::from(start));
            let mut counts = vec![0u64; atoms.len()];
            for _ in start..end {
                let x = unit_interval(rng.next_u64()) * total;
                let k = cumulative.partition_point(|&c| c <= x).min(last);
                counts[k] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; atoms.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let mut assignment_counts = BTreeMap::new();
    let mut outcome_counts = BTreeMap::new();
    for (&(label, _), &count) in atoms.iter().zip(&per_atom) {
        assignment_counts.insert(label.to_string(), count);
        let outcome = sign_string(&space.outcomes(space.parse_label(label)?, &positions));
        *outcome_counts.entry(outcome).or_insert(0) += count;
    }
    Ok(SampleCounts {
        settings: settings.to_vec(),
        n,
        seed,
        assignment_counts,
        outcome_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{build_singular_contextual_model, ghz_constraints};

    #[test]
    fn chunking_does_not_change_counts() {
        let family = ghz_constraints();
        let m = build_singular_contextual_model(&family).unwrap();
        let s = family[1].settings();
        let a = sample_chunked(&m, s, 10_007, 3, 1).unwrap();
        let b = sample_chunked(&m, s, 10_007, 3, 333).unwrap();
        let c = sample_chunked(&m, s, 10_007, 3, 1 << 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn seeds_and_settings_use_distinct_streams() {
        let family = ghz_constraints();
        let m = build_singular_contextual_model(&family).unwrap();
        let a = sample(&m, family[0].settings(), 5000, 1).unwrap();
        let b = sample(&m, family[0].settings(), 5000, 2).unwrap();
        assert_ne!(a.outcome_counts, b.outcome_counts);
    }

    #[test]
    fn errors() {
        let family = ghz_constraints();
        let m = build_singular_contextual_model(&family).unwrap();
        assert_eq!(sample(&m, family[0].settings(), 0, 1), Err(HvError::NoSamples));
        let unknown = vec![Phase::ZERO; 3];
        assert!(matches!(sample(&m, &unknown, 10, 1), Err(HvError::UnknownSetting(_))));
    }

    #[test]
    fn csv_layout() {
        let family = ghz_constraints();
        let m = build_singular_contextual_model(&family).unwrap();
        let counts = sample(&m, family[0].settings(), 100, 9).unwrap();
        let csv = counts.to_csv();
        assert!(csv.starts_with("outcome,count\n"));
        assert_eq!(csv.lines().count(), 5);
        let total: u64 = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
            .sum();
        assert_eq!(total, 100);
    }
}
