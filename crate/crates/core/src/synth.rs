//! Synthetic city generation and the reporting process over it.
//!
//! All randomness is drawn as `f64` from per-purpose child streams, so a
//! city materialized at `f32` sees the same draws as one at `f64` and any
//! period can be regenerated independently of the others.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::city::{Block, BlockId, City, CityConfig, PeriodIndex};
use crate::data::{ObservationRecord, Source};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::seed::RandomSeed;

/// Inspector phrasings for visits that found evidence. Each one codes to
/// a positive outcome under the builtin rule table.
pub const FOUND_NOTES: [&str; 7] = [
    "Found two burrows along the rear fence.",
    "Fresh droppings near the trash room.",
    "Active burrow at the foundation, baited today.",
    "Gnaw marks on the door frame, set traps.",
    "Rats observed behind the dumpster.",
    "Heavy rat activity in the alley.",
    "Rats present under the loading dock.",
];

/// Phrasings for visits that came up clear; each codes to a negative
/// outcome under the builtin rule table.
pub const CLEAR_NOTES: [&str; 6] = [
    "No evidence of rats on the property.",
    "Property clear after follow-up.",
    "No burrows found near the bins.",
    "Bait stations inactive, no droppings seen.",
    "Checked the yard, without burrows.",
    "No rat activity after treatment.",
];

/// Everything true and observed about one simulated month.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodTruth {
    pub period: PeriodIndex,
    /// Ground-truth infestation flag per block, in block id order.
    pub infested: Vec<u8>,
    /// Report records that month, notes uncoded.
    pub records: Vec<ObservationRecord>,
}

/// Draws block features and derives ward reporting propensities.
///
/// Wards are contiguous stripes of the first-feature order, so the
/// reporting bias is a function of something every model can see. Ward
/// propensity is `base * exp(bias * z)` for the standardized ward mean
/// `z` of that feature, clipped to one.
pub fn generate_city<F: Scalar>(config: &CityConfig<F>, seed: RandomSeed) -> Result<City<F>> {
    config.validate()?;
    let n = config.n_blocks as usize;
    let d = config.n_features as usize;
    let wards = config.n_wards as usize;

    let mut rng = seed.child("city", 0).rng();
    let mut features: Vec<Vec<F>> = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<F> = (0..d)
            .map(|_| {
                let v: f64 = StandardNormal.sample(&mut rng);
                F::from64(v)
            })
            .collect();
        features.push(row);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        features[a][0]
            .partial_cmp(&features[b][0])
            .expect("finite features")
            .then(a.cmp(&b))
    });
    let mut ward_of = vec![0u32; n];
    for (rank, &b) in order.iter().enumerate() {
        ward_of[b] = ((rank * wards) / n) as u32;
    }

    let mut ward_sum = vec![0.0f64; wards];
    let mut ward_count = vec![0usize; wards];
    for b in 0..n {
        ward_sum[ward_of[b] as usize] += features[b][0].into64();
        ward_count[ward_of[b] as usize] += 1;
    }
    let means: Vec<f64> = ward_sum
        .iter()
        .zip(&ward_count)
        .map(|(s, &c)| s / c as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / wards as f64;
    let var = means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / wards as f64;
    let sd = var.sqrt();

    let base = config.report_base_rate.into64();
    let bias = config.bias_strength.into64();
    let ward_propensity: Vec<F> = means
        .iter()
        .map(|&m| {
            let z = if sd > 0.0 { (m - grand) / sd } else { 0.0 };
            F::from64((base * (bias * z).exp()).min(1.0))
        })
        .collect();

    let blocks: Vec<Block<F>> = features
        .into_iter()
        .enumerate()
        .map(|(id, f)| Block {
            id: id as BlockId,
            ward: ward_of[id],
            features: f,
        })
        .collect();

    let city = City {
        config: config.clone(),
        blocks,
        ward_propensity,
    };
    city.validate()?;
    Ok(city)
}

/// Ground-truth infestation flags for one month, in block id order.
///
/// Reporting and field inspection both build on this, sharing the child
/// stream so they agree about what is true.
pub fn infestation_for_period<F: Scalar>(
    city: &City<F>,
    period: PeriodIndex,
    seed: RandomSeed,
) -> Vec<u8> {
    let mut rng = seed.child("infest", period as u64).rng();
    city.blocks
        .iter()
        .map(|b| {
            let risk = city
                .true_risk(b.id)
                .expect("block ids are dense")
                .into64();
            u8::from(rng.gen::<f64>() < risk)
        })
        .collect()
}

/// Simulates one month of resident reports and follow-up inspections.
///
/// A block generates at most one report. Infested blocks report at their
/// ward propensity; clear blocks at the propensity scaled by the false
/// request rate. Each report is inspected: evidence is found with the
/// detection probability when infestation is real, never otherwise. The
/// note records what the inspector saw; outcomes are left for coding.
pub fn simulate_period<F: Scalar>(
    city: &City<F>,
    period: PeriodIndex,
    seed: RandomSeed,
) -> PeriodTruth {
    let infested = infestation_for_period(city, period, seed);
    let mut rng = seed.child("report", period as u64).rng();
    let false_rate = city.config.false_request_rate.into64();
    let detect = city.config.detection_prob.into64();

    let mut records = Vec::new();
    for block in &city.blocks {
        let propensity = city.ward_propensity[block.ward as usize].into64();
        let is_infested = infested[block.id as usize] > 0;
        let arrival = if is_infested {
            propensity
        } else {
            propensity * false_rate
        };
        if rng.gen::<f64>() >= arrival {
            continue;
        }
        let found = is_infested && rng.gen::<f64>() < detect;
        let note = if found {
            FOUND_NOTES[rng.gen_range(0..FOUND_NOTES.len())]
        } else {
            CLEAR_NOTES[rng.gen_range(0..CLEAR_NOTES.len())]
        };
        records.push(ObservationRecord {
            block_id: block.id,
            period,
            source: Source::Report,
            note: Some(note.to_string()),
            outcome: None,
        });
    }
    PeriodTruth {
        period,
        infested,
        records,
    }
}

/// Simulates months `0..n_periods`.
pub fn simulate_periods<F: Scalar>(
    city: &City<F>,
    n_periods: u32,
    seed: RandomSeed,
) -> Vec<PeriodTruth> {
    (0..n_periods)
        .map(|p| simulate_period(city, p, seed))
        .collect()
}

/// All report records of a simulation run, in period order.
pub fn flatten_records(periods: &[PeriodTruth]) -> Vec<ObservationRecord> {
    periods.iter().flat_map(|p| p.records.clone()).collect()
}

/// Proactively inspects the given blocks in one month.
///
/// Infestation truth comes from the same stream as [`simulate_period`],
/// so a field visit and that month's reports describe the same city.
/// Detection draws are independent of report inspections. Outcomes are
/// recorded directly, without notes.
pub fn field_inspect<F: Scalar>(
    city: &City<F>,
    blocks: &[BlockId],
    period: PeriodIndex,
    seed: RandomSeed,
) -> Vec<ObservationRecord> {
    let infested = infestation_for_period(city, period, seed);
    let mut rng = seed.child("field", period as u64).rng();
    let detect = city.config.detection_prob.into64();
    blocks
        .iter()
        .map(|&b| {
            let is_infested = infested
                .get(b as usize)
                .map(|&v| v > 0)
                .unwrap_or(false);
            let found = is_infested && rng.gen::<f64>() < detect;
            ObservationRecord {
                block_id: b,
                period,
                source: Source::Field,
                note: None,
                outcome: Some(u8::from(found)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notes::RuleTable;

    fn small_config() -> CityConfig<f64> {
        CityConfig {
            n_blocks: 400,
            n_wards: 4,
            n_features: 3,
            risk_weights: vec![0.5, -0.3, 0.2],
            risk_intercept: -0.4,
            report_base_rate: 0.4,
            bias_strength: 1.0,
            detection_prob: 0.8,
            false_request_rate: 1.0,
        }
    }

    #[test]
    fn city_generation_is_deterministic() {
        let cfg = small_config();
        let a = generate_city(&cfg, RandomSeed(7)).unwrap();
        let b = generate_city(&cfg, RandomSeed(7)).unwrap();
        assert_eq!(a, b);
        let c = generate_city(&cfg, RandomSeed(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn wards_stripe_the_first_feature() {
        let city = generate_city(&small_config(), RandomSeed(3)).unwrap();
        // Every block of a higher ward has first feature at least as large
        // as every block of a lower ward.
        let mut max_by_ward = vec![f64::NEG_INFINITY; 4];
        let mut min_by_ward = vec![f64::INFINITY; 4];
        for b in &city.blocks {
            let w = b.ward as usize;
            max_by_ward[w] = max_by_ward[w].max(b.features[0]);
            min_by_ward[w] = min_by_ward[w].min(b.features[0]);
        }
        for w in 1..4 {
            assert!(min_by_ward[w] >= max_by_ward[w - 1]);
        }
        // Stripes are balanced.
        let mut counts = vec![0usize; 4];
        for b in &city.blocks {
            counts[b.ward as usize] += 1;
        }
        assert_eq!(counts, vec![100, 100, 100, 100]);
    }

    #[test]
    fn zero_bias_gives_every_ward_the_base_rate() {
        let cfg = small_config().with_bias(0.0);
        let city = generate_city(&cfg, RandomSeed(5)).unwrap();
        for &p in &city.ward_propensity {
            assert_eq!(p, 0.4);
        }
    }

    #[test]
    fn positive_bias_orders_propensity_with_the_stripes() {
        let city = generate_city(&small_config(), RandomSeed(5)).unwrap();
        for w in 1..city.ward_propensity.len() {
            assert!(city.ward_propensity[w] >= city.ward_propensity[w - 1]);
        }
        assert!(city.ward_propensity[0] < 0.4);
    }

    #[test]
    fn float_width_does_not_change_the_draws() {
        let cfg64 = small_config();
        let cfg32 = CityConfig::<f32> {
            n_blocks: cfg64.n_blocks,
            n_wards: cfg64.n_wards,
            n_features: cfg64.n_features,
            risk_weights: cfg64.risk_weights.iter().map(|&w| w as f32).collect(),
            risk_intercept: cfg64.risk_intercept as f32,
            report_base_rate: cfg64.report_base_rate as f32,
            bias_strength: cfg64.bias_strength as f32,
            detection_prob: cfg64.detection_prob as f32,
            false_request_rate: cfg64.false_request_rate as f32,
        };
        let c64 = generate_city(&cfg64, RandomSeed(11)).unwrap();
        let c32 = generate_city(&cfg32, RandomSeed(11)).unwrap();
        for (a, b) in c64.blocks.iter().zip(&c32.blocks) {
            assert_eq!(a.ward, b.ward);
            for (x, y) in a.features.iter().zip(&b.features) {
                assert_eq!(*x as f32, *y);
            }
        }
    }

    #[test]
    fn perfect_detection_without_false_requests_reports_only_infested() {
        let mut cfg = small_config();
        cfg.false_request_rate = 0.0;
        cfg.detection_prob = 1.0;
        cfg.bias_strength = 0.0;
        cfg.report_base_rate = 1.0;
        let city = generate_city(&cfg, RandomSeed(2)).unwrap();
        let truth = simulate_period(&city, 0, RandomSeed(2));
        let rules = RuleTable::builtin();
        assert!(!truth.records.is_empty());
        for rec in &truth.records {
            assert_eq!(truth.infested[rec.block_id as usize], 1);
            let coded = rules.code_note(rec.note.as_deref().unwrap());
            assert_eq!(coded, Some(1));
        }
        let n_infested: usize = truth.infested.iter().map(|&v| v as usize).sum();
        assert_eq!(truth.records.len(), n_infested);
    }

    #[test]
    fn note_pools_round_trip_under_builtin_rules() {
        let rules = RuleTable::builtin();
        for n in FOUND_NOTES {
            assert_eq!(rules.code_note(n), Some(1), "found note {n:?}");
        }
        for n in CLEAR_NOTES {
            assert_eq!(rules.code_note(n), Some(0), "clear note {n:?}");
        }
    }

    #[test]
    fn periods_differ_but_replay_identically() {
        let city = generate_city(&small_config(), RandomSeed(9)).unwrap();
        let p0 = simulate_period(&city, 0, RandomSeed(9));
        let p1 = simulate_period(&city, 1, RandomSeed(9));
        assert_ne!(p0.infested, p1.infested);
        let again = simulate_period(&city, 0, RandomSeed(9));
        assert_eq!(p0, again);
    }

    #[test]
    fn field_inspection_agrees_with_the_period_truth() {
        let mut cfg = small_config();
        cfg.detection_prob = 1.0;
        let city = generate_city(&cfg, RandomSeed(13)).unwrap();
        let truth = simulate_period(&city, 4, RandomSeed(13));
        let sample: Vec<BlockId> = (0..400).step_by(7).collect();
        let recs = field_inspect(&city, &sample, 4, RandomSeed(13));
        assert_eq!(recs.len(), sample.len());
        for rec in &recs {
            assert_eq!(rec.source, Source::Field);
            assert_eq!(
                rec.outcome,
                Some(truth.infested[rec.block_id as usize])
            );
        }
    }

    #[test]
    fn imperfect_detection_only_misses_never_invents() {
        let city = generate_city(&small_config(), RandomSeed(21)).unwrap();
        let truth = simulate_period(&city, 2, RandomSeed(21));
        let all: Vec<BlockId> = (0..400).collect();
        let recs = field_inspect(&city, &all, 2, RandomSeed(21));
        let mut found = 0usize;
        for rec in &recs {
            if rec.outcome == Some(1) {
                assert_eq!(truth.infested[rec.block_id as usize], 1);
                found += 1;
            }
        }
        let infested: usize = truth.infested.iter().map(|&v| v as usize).sum();
        assert!(found < infested);
        assert!(found > infested / 2);
    }
}
