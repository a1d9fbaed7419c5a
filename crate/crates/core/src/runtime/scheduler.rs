//! Daily activation scheduling: each day a uniform sample of the population
//! wakes up and takes a turn.

use rand::seq::index::sample;

use crate::platform::AuthorHash;
use crate::seed;

/// Select `ceil(fraction * N)` agents for one day, uniformly without
/// replacement, deterministic per `(day, rng_seed)`. The returned list
/// preserves population order so downstream iteration is stable.
pub fn schedule_day(
    population: &[AuthorHash],
    activation_fraction: f64,
    day: u32,
    rng_seed: u64,
) -> Vec<AuthorHash> {
    assert!(
        (0.0..=1.0).contains(&activation_fraction),
        "activation fraction must be in [0, 1]"
    );
    let n = population.len();
    let k = ((activation_fraction * n as f64).ceil() as usize).min(n);
    if k == 0 {
        return Vec::new();
    }
    let mut rng = seed::rng(seed::derive_idx(rng_seed, "schedule-day", day as u64));
    let mut picked: Vec<usize> = sample(&mut rng, n, k).into_iter().collect();
    picked.sort_unstable();
    picked.into_iter().map(|i| population[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn population(n: usize) -> Vec<AuthorHash> {
        (0..n).map(|i| AuthorHash::from(format!("pop-{i:04}").as_str())).collect()
    }

    #[test]
    fn full_fraction_activates_everyone() {
        let pop = population(37);
        assert_eq!(schedule_day(&pop, 1.0, 0, 7), pop);
    }

    #[test]
    fn sample_size_is_the_ceiling() {
        let pop = population(100);
        assert_eq!(schedule_day(&pop, 0.101, 0, 7).len(), 11);
        assert_eq!(schedule_day(&pop, 0.0, 0, 7).len(), 0);
    }

    #[test]
    fn identical_day_and_seed_give_identical_sets() {
        let pop = population(100);
        assert_eq!(schedule_day(&pop, 0.1, 3, 42), schedule_day(&pop, 0.1, 3, 42));
        assert_ne!(schedule_day(&pop, 0.1, 3, 42), schedule_day(&pop, 0.1, 4, 42));
    }

    fn binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
        // log-space to stay stable for n=25
        let ln_choose = (1..=k).map(|i| ((n - k + i) as f64).ln() - (i as f64).ln()).sum::<f64>();
        (ln_choose + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
    }

    // Per-agent activation counts over many days should fit Binomial(days, f):
    // days are independent and each day is an exact-size uniform sample.
    #[test]
    fn activation_counts_fit_the_binomial_law() {
        let pop = population(2000);
        let days = 25u32;
        let f = 0.4;
        let mut counts = vec![0u64; pop.len()];
        for day in 0..days {
            for a in schedule_day(&pop, f, day, 99) {
                let idx: usize = a.as_str()[4..].parse().unwrap();
                counts[idx] += 1;
            }
        }
        // chi-square against Binomial(25, 0.4), pooling tails so every
        // bucket expects at least ~5 observations
        let n = pop.len() as f64;
        let mut observed = vec![0f64; 26];
        for c in &counts {
            observed[*c as usize] += 1.0;
        }
        let expected: Vec<f64> =
            (0..26).map(|k| n * binomial_pmf(days as u64, f, k as u64)).collect();
        let (mut chi2, mut df) = (0.0, 0usize);
        let (mut o_tail, mut e_tail) = (0.0, 0.0);
        for k in 0..26 {
            if expected[k] >= 5.0 {
                chi2 += (observed[k] - expected[k]).powi(2) / expected[k];
                df += 1;
            } else {
                o_tail += observed[k];
                e_tail += expected[k];
            }
        }
        if e_tail > 0.0 {
            chi2 += (o_tail - e_tail).powi(2) / e_tail;
            df += 1;
        }
        // generous 99.9th-percentile-ish bound for df ~ 12
        assert!(chi2 < 3.0 * df as f64 + 20.0, "chi2 {chi2} with {df} buckets");
    }
}
