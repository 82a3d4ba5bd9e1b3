//! Synthetic process logs.
//!
//! Each class lists template unit sequences with frequencies. A template is
//! emitted `frequency` times; each copy is perturbed independently:
//!
//! 1. every step is replaced, with probability `substitution`, by a uniformly
//!    chosen different unit;
//! 2. with probability `insertion` one random unit is inserted at a uniformly
//!    chosen position;
//! 3. with probability `deletion` one uniformly chosen step is removed (never
//!    the last remaining step).
//!
//! Copies of templates tagged `NP` are always `NP`. Copies of `SP` templates
//! stay `SP` only if the noise left them identical to the template; perturbed
//! copies deviate from the standard routine and are tagged `NP`.
//!
//! Units are named `OU000`, `OU001`, ... (at least three digits).

use serde::{Deserialize, Serialize};

use super::{DatasetError, EventLog};
use crate::encoding::{ProcessTrace, Tag};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    #[serde(default)]
    pub substitution: f64,
    #[serde(default)]
    pub insertion: f64,
    #[serde(default)]
    pub deletion: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel { substitution: 0.0, insertion: 0.0, deletion: 0.0 };

    pub fn new(substitution: f64, insertion: f64, deletion: f64) -> Self {
        Self { substitution, insertion, deletion }
    }

    fn validate(&self) -> Result<(), DatasetError> {
        for (name, p) in [
            ("substitution", self.substitution),
            ("insertion", self.insertion),
            ("deletion", self.deletion),
        ] {
            if !(0.0..1.0).contains(&p) {
                return Err(DatasetError::Spec(format!("{name} probability {p} not in [0, 1)")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Template {
    /// Unit indices in `[0, unit_count)`.
    pub steps: Vec<usize>,
    pub frequency: u64,
    #[serde(default = "default_tag")]
    pub tag: Tag,
    /// Overrides the spec-wide noise for this template.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModel>,
}

fn default_tag() -> Tag {
    Tag::Sp
}

impl Template {
    pub fn new(steps: Vec<usize>, frequency: u64, tag: Tag) -> Self {
        Self { steps, frequency, tag, noise: None }
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = Some(noise);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthClass {
    pub label: String,
    pub templates: Vec<Template>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub seed: u64,
    pub unit_count: usize,
    #[serde(default)]
    pub noise: NoiseModel,
    pub classes: Vec<SynthClass>,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.unit_count == 0 {
            return Err(DatasetError::Spec("unit_count must be positive".into()));
        }
        self.noise.validate()?;
        if self.classes.is_empty() {
            return Err(DatasetError::Spec("no classes".into()));
        }
        for class in &self.classes {
            if class.label.is_empty() {
                return Err(DatasetError::Spec("empty class label".into()));
            }
            if class.templates.is_empty() {
                return Err(DatasetError::Spec(format!("class {} has no templates", class.label)));
            }
            for (i, t) in class.templates.iter().enumerate() {
                let what = format!("class {} template {i}", class.label);
                if t.frequency == 0 {
                    return Err(DatasetError::Spec(format!("{what}: frequency must be positive")));
                }
                if t.steps.is_empty() {
                    return Err(DatasetError::Spec(format!("{what}: no steps")));
                }
                if let Some(&u) = t.steps.iter().find(|&&u| u >= self.unit_count) {
                    return Err(DatasetError::Spec(format!(
                        "{what}: unit {u} outside universe of {}",
                        self.unit_count
                    )));
                }
                let noise = t.noise.unwrap_or(self.noise);
                noise.validate()?;
                if noise.substitution > 0.0 && self.unit_count < 2 {
                    return Err(DatasetError::Spec("substitution needs at least two units".into()));
                }
            }
        }
        Ok(())
    }

    pub fn unit_name(&self, index: usize) -> String {
        let width = (self.unit_count.saturating_sub(1)).to_string().len().max(3);
        format!("OU{index:0width$}")
    }

    pub fn from_json(text: &str) -> Result<Self, DatasetError> {
        let spec: SynthSpec = serde_json::from_str(text).map_err(|e| DatasetError::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

fn perturb(steps: &mut Vec<usize>, noise: &NoiseModel, unit_count: usize, rng: &mut SplitMix64) {
    for step in steps.iter_mut() {
        if rng.chance(noise.substitution) {
            let mut other = rng.below(unit_count as u64 - 1) as usize;
            if other >= *step {
                other += 1;
            }
            *step = other;
        }
    }
    if rng.chance(noise.insertion) {
        let pos = rng.below(steps.len() as u64 + 1) as usize;
        let unit = rng.below(unit_count as u64) as usize;
        steps.insert(pos, unit);
    }
    if rng.chance(noise.deletion) && steps.len() > 1 {
        let pos = rng.below(steps.len() as u64) as usize;
        steps.remove(pos);
    }
}

/// Expands a spec into a log. Deterministic in `spec.seed`.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<EventLog, DatasetError> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let names: Vec<String> = (0..spec.unit_count).map(|i| spec.unit_name(i)).collect();
    let mut traces = Vec::new();
    for class in &spec.classes {
        let mut case_no = 0usize;
        for template in &class.templates {
            let noise = template.noise.unwrap_or(spec.noise);
            for _ in 0..template.frequency {
                let mut steps = template.steps.clone();
                perturb(&mut steps, &noise, spec.unit_count, &mut rng);
                let tag = if template.tag == Tag::Np || steps != template.steps {
                    Tag::Np
                } else {
                    Tag::Sp
                };
                traces.push(ProcessTrace {
                    case_id: format!("{}-{case_no:06}", class.label),
                    label: Some(class.label.clone()),
                    tag: Some(tag),
                    steps: steps.iter().map(|&u| names[u].clone()).collect(),
                });
                case_no += 1;
            }
        }
    }
    Ok(EventLog::new(traces))
}

/// Ready-made specs used by the examples and tests.
pub mod presets {
    use super::*;

    /// Class A's standard subset: four zero-noise templates with
    /// frequencies 567, 35, 45 and 52 (699 traces).
    pub fn class_a_sp(seed: u64) -> SynthSpec {
        let templates = [
            vec![0, 1, 2, 3, 1, 4],
            vec![0, 1, 2, 5, 1, 4],
            vec![0, 2, 1, 3, 1, 4],
            vec![0, 1, 3, 1, 4],
        ];
        let freqs = [567, 35, 45, 52];
        SynthSpec {
            seed,
            unit_count: 8,
            noise: NoiseModel::NONE,
            classes: vec![SynthClass {
                label: "A".into(),
                templates: templates
                    .into_iter()
                    .zip(freqs)
                    .map(|(s, f)| Template::new(s, f, Tag::Sp))
                    .collect(),
            }],
        }
    }

    /// Two zero-noise templates over disjoint units, `per_tag` copies each.
    pub fn separable(seed: u64, per_tag: u64) -> SynthSpec {
        SynthSpec {
            seed,
            unit_count: 8,
            noise: NoiseModel::NONE,
            classes: vec![SynthClass {
                label: "S".into(),
                templates: vec![
                    Template::new(vec![0, 1, 2, 3], per_tag, Tag::Sp),
                    Template::new(vec![4, 5, 6, 7], per_tag, Tag::Np),
                ],
            }],
        }
    }

    /// Low-entropy class shaped like class A: the four standard templates
    /// (567/35/45/52, noise-free) plus 870 non-conform traces from six
    /// deviant routines with mild noise.
    pub fn class_a_like(seed: u64) -> SynthSpec {
        let mut spec = class_a_sp(seed);
        spec.unit_count = 16;
        let mild = NoiseModel::new(0.03, 0.05, 0.05);
        let deviants: [(Vec<usize>, u64); 6] = [
            (vec![0, 1, 4], 310),
            (vec![0, 6, 2, 3, 1, 4], 180),
            (vec![0, 1, 2, 3, 7, 8, 4], 150),
            (vec![9, 1, 2, 3, 1, 4], 110),
            (vec![0, 1, 10, 11, 4, 12], 70),
            (vec![0, 13, 14, 1, 4], 50),
        ];
        let class = &mut spec.classes[0];
        for t in &mut class.templates {
            t.noise = Some(NoiseModel::NONE);
        }
        class.templates.extend(
            deviants
                .into_iter()
                .map(|(s, f)| Template::new(s, f, Tag::Np).with_noise(mild)),
        );
        spec
    }

    /// Heavily overlapping classes: both tags replay the same eight
    /// noise-free routines with mirrored frequencies, so with enough
    /// training both discriminators respond fully to most inputs.
    pub fn saturating(seed: u64) -> SynthSpec {
        let routines: [Vec<usize>; 8] = [
            vec![0, 1, 2, 3, 4, 5],
            vec![0, 1, 2, 6, 4, 5],
            vec![0, 2, 1, 3, 4, 5],
            vec![0, 1, 3, 4, 5],
            vec![0, 7, 2, 3, 4, 5],
            vec![0, 1, 2, 3, 8, 5],
            vec![0, 1, 9, 3, 4, 5],
            vec![0, 1, 2, 3, 4, 10, 5],
        ];
        let sp_freq = [60, 50, 40, 30, 20, 15, 10, 5];
        let mut templates = Vec::new();
        for (i, r) in routines.iter().enumerate() {
            templates.push(Template::new(r.clone(), sp_freq[i], Tag::Sp));
            templates.push(Template::new(r.clone(), sp_freq[7 - i], Tag::Np));
        }
        SynthSpec {
            seed,
            unit_count: 12,
            noise: NoiseModel::NONE,
            classes: vec![SynthClass { label: "X".into(), templates }],
        }
    }

    /// Paper-sized geometry: 173 units, longest trace 78 steps (13,494-bit
    /// one-hot retinas), `total` traces split evenly between SP and NP.
    pub fn paper_scale(seed: u64, total: u64) -> SynthSpec {
        const UNITS: usize = 173;
        const MAX_LEN: usize = 78;
        let mut rng = SplitMix64::new(crate::rng::derive_seed(seed, &[0x7E4A]));
        let mut random_template = |len: usize| -> Vec<usize> {
            (0..len).map(|_| rng.below(UNITS as u64) as usize).collect()
        };
        // The first templates walk the whole unit universe so the catalog
        // covers all 173 units; one of them has the maximum length.
        let cover: Vec<Vec<usize>> = (0..UNITS)
            .collect::<Vec<_>>()
            .chunks(MAX_LEN)
            .map(<[usize]>::to_vec)
            .collect();
        let mut sp: Vec<Vec<usize>> = cover;
        let mut np: Vec<Vec<usize>> = Vec::new();
        for i in 0..9 {
            sp.push(random_template(12 + 5 * i));
            np.push(random_template(10 + 6 * i));
        }
        for i in 0..3 {
            np.push(random_template(40 + 10 * i));
        }
        let per_side = total / 2;
        let spread = |count: usize, budget: u64| -> Vec<u64> {
            let base = budget / count as u64;
            let mut f = vec![base; count];
            f[0] += budget - base * count as u64;
            f
        };
        let sp_f = spread(sp.len(), per_side);
        let np_f = spread(np.len(), total - per_side);
        let mild = NoiseModel::new(0.01, 0.05, 0.05);
        let mut templates = Vec::new();
        for (s, f) in sp.into_iter().zip(sp_f) {
            templates.push(Template::new(s, f, Tag::Sp).with_noise(NoiseModel::NONE));
        }
        for (s, f) in np.into_iter().zip(np_f) {
            // Insertions could push a 78-step template past 78.
            let noise = if s.len() >= MAX_LEN { NoiseModel::NONE } else { mild };
            templates.push(Template::new(s, f, Tag::Np).with_noise(noise));
        }
        SynthSpec {
            seed,
            unit_count: UNITS,
            noise: NoiseModel::NONE,
            classes: vec![SynthClass { label: "P".into(), templates }],
        }
    }
}
