//! Entry-game experiments: outcome histograms and reaction-time misjudgment.

use super::dist::{DistributionSpec, Unit};
use super::rng::rng_stream;
use super::{check_iterations, run_iterations, standard_error, Tally};
use crate::error::{Error, Result};
use crate::kinematics::{classify_case, ArrivalTimes, EntryCase, PedestrianParams, VehicleParams};
use crate::scenario::toml_error;
use serde::Deserialize;

/// Vehicle and pedestrian parameters for one population of encounters.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingProfile {
    pub name: String,
    pub distance: DistributionSpec,
    pub speed: DistributionSpec,
    /// Actual reaction time of the driver.
    pub reaction: DistributionSpec,
    /// Braking deceleration magnitude, m/s².
    pub decel: f64,
    /// Reaction time the pedestrian plans with; `None` means the true one.
    pub assumed_reaction: Option<f64>,
    pub pedestrian: PedestrianParams,
}

impl CrossingProfile {
    fn base(name: &str, speed_kmh: f64, reaction: DistributionSpec, assumed: Option<f64>) -> Self {
        Self {
            name: name.into(),
            distance: DistributionSpec::uniform(10.0, 50.0, Unit::Meters),
            speed: DistributionSpec::gaussian(speed_kmh, 10.0, 1.0, Unit::KilometersPerHour),
            reaction,
            decel: 2.5,
            assumed_reaction: assumed,
            pedestrian: PedestrianParams::default(),
        }
    }

    /// Automated vehicle: speed ~ N(30, 10) km/h, no reaction delay.
    pub fn av() -> Self {
        Self::base("AV", 30.0, DistributionSpec::constant(0.0, Unit::Seconds), None)
    }

    /// Human driver, worst case: speed ~ N(50, 10) km/h, reaction 1.5 s.
    pub fn human() -> Self {
        Self::base("HUMAN", 50.0, DistributionSpec::constant(1.5, Unit::Seconds), None)
    }

    /// Human driver with reaction `0.8 + Exp(mean 0.2)` s while the pedestrian plans
    /// with the 1.5 s worst case.
    pub fn misjudgment() -> Self {
        Self::base(
            "MISJUDGMENT",
            50.0,
            DistributionSpec::shifted_exponential(0.8, 0.2, Unit::Seconds),
            Some(1.5),
        )
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "AV" => Some(Self::av()),
            "HUMAN" => Some(Self::human()),
            "MISJUDGMENT" => Some(Self::misjudgment()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains([',', '\n', '"']) {
            return Err(Error::config(
                "profile.name",
                "must be non-empty without commas or quotes",
            ));
        }
        self.distance.validate("distance")?;
        self.speed.validate("speed")?;
        self.reaction.validate("reaction")?;
        if self.distance.lower_bound() <= 0.0 {
            return Err(Error::config("distance", "support must be > 0"));
        }
        if self.speed.lower_bound() < 0.0 {
            return Err(Error::config("speed", "support must be > 0"));
        }
        if self.reaction.lower_bound() < 0.0 {
            return Err(Error::config("reaction", "support must be >= 0"));
        }
        if !(self.decel.is_finite() && self.decel > 0.0) {
            return Err(Error::config("decel", "must be > 0"));
        }
        if let Some(t) = self.assumed_reaction {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::config("assumed_reaction", "must be >= 0"));
            }
        }
        PedestrianParams::new(self.pedestrian.lane_width, self.pedestrian.walk_speed)
            .map_err(|e| Error::config("pedestrian", e.to_string()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub iterations: u64,
    pub profile: CrossingProfile,
    pub workers: Option<usize>,
}

impl SimConfig {
    pub fn new(profile: CrossingProfile) -> Self {
        Self {
            seed: 42,
            iterations: 1_000_000,
            profile,
            workers: None,
        }
    }
}

/// Several profiles sharing seed and iteration count.
///
/// ```toml
/// seed = 42
/// iterations = 1000000
///
/// [[profile]]
/// name = "HUMAN"           # presets: AV, HUMAN, MISJUDGMENT
/// assumed_reaction = 1.0
/// [profile.reaction]
/// kind = "shifted_exponential"
/// shift = 0.8
/// mean = 0.2
/// units = "s"
/// ```
///
/// A profile starts from the preset named by `preset`, else by `name`, else the
/// first default profile, and overrides whichever fields are given.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub iterations: u64,
    pub workers: Option<usize>,
    pub profiles: Vec<CrossingProfile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPedestrian {
    lane_width: Option<f64>,
    walk_speed: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    name: Option<String>,
    preset: Option<String>,
    distance: Option<DistributionSpec>,
    speed: Option<DistributionSpec>,
    reaction: Option<DistributionSpec>,
    decel: Option<f64>,
    /// `false` plans with the true reaction time.
    assumed_reaction: Option<AssumedReaction>,
    pedestrian: Option<RawPedestrian>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AssumedReaction {
    Seconds(f64),
    Flag(bool),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    seed: Option<u64>,
    iterations: Option<u64>,
    workers: Option<usize>,
    profile: Option<Vec<RawProfile>>,
}

impl ExperimentConfig {
    pub fn new(profiles: Vec<CrossingProfile>) -> Self {
        Self {
            seed: 42,
            iterations: 1_000_000,
            workers: None,
            profiles,
        }
    }

    /// AV and human profiles.
    pub fn entry_default() -> Self {
        Self::new(vec![CrossingProfile::av(), CrossingProfile::human()])
    }

    pub fn misjudgment_default() -> Self {
        Self::new(vec![CrossingProfile::misjudgment()])
    }

    /// Parses `text` on top of `defaults`; a `[[profile]]` list replaces the default profiles.
    pub fn from_toml_str(text: &str, defaults: Self) -> Result<Self> {
        let raw: RawExperiment = toml::from_str(text).map_err(|e| toml_error(&e))?;
        let mut cfg = defaults;
        cfg.seed = raw.seed.unwrap_or(cfg.seed);
        cfg.iterations = raw.iterations.unwrap_or(cfg.iterations);
        cfg.workers = raw.workers.or(cfg.workers);
        if let Some(list) = raw.profile {
            let fallback = cfg.profiles.first().cloned().unwrap_or_else(CrossingProfile::human);
            cfg.profiles = list
                .into_iter()
                .map(|p| {
                    let mut profile = match p.preset.as_deref() {
                        Some(name) => CrossingProfile::preset(name)
                            .ok_or_else(|| Error::config("profile.preset", format!("unknown preset `{name}`")))?,
                        None => p
                            .name
                            .as_deref()
                            .and_then(CrossingProfile::preset)
                            .unwrap_or_else(|| fallback.clone()),
                    };
                    if let Some(name) = p.name {
                        profile.name = name;
                    }
                    profile.distance = p.distance.unwrap_or(profile.distance);
                    profile.speed = p.speed.unwrap_or(profile.speed);
                    profile.reaction = p.reaction.unwrap_or(profile.reaction);
                    profile.decel = p.decel.unwrap_or(profile.decel);
                    match p.assumed_reaction {
                        Some(AssumedReaction::Seconds(t)) => profile.assumed_reaction = Some(t),
                        Some(AssumedReaction::Flag(false)) => profile.assumed_reaction = None,
                        Some(AssumedReaction::Flag(true)) => {
                            return Err(Error::config("assumed_reaction", "give a time in seconds or false"))
                        }
                        None => {}
                    }
                    if let Some(ped) = p.pedestrian {
                        profile.pedestrian.lane_width = ped.lane_width.unwrap_or(profile.pedestrian.lane_width);
                        profile.pedestrian.walk_speed = ped.walk_speed.unwrap_or(profile.pedestrian.walk_speed);
                    }
                    Ok(profile)
                })
                .collect::<Result<_>>()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_iterations(self.iterations)?;
        if self.profiles.is_empty() {
            return Err(Error::config("profile", "no profiles given"));
        }
        for p in &self.profiles {
            p.validate()?;
        }
        Ok(())
    }

    pub fn sim_configs(&self) -> Vec<SimConfig> {
        self.profiles
            .iter()
            .map(|p| SimConfig {
                seed: self.seed,
                iterations: self.iterations,
                profile: p.clone(),
                workers: self.workers,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutcomeHistogram {
    pub profile: String,
    pub iterations: u64,
    pub cross_keep: u64,
    pub cross_brake: u64,
    pub out: u64,
    /// Crossed while the vehicle actually reached the conflict point first.
    pub collisions: u64,
    /// Crossed while planning with a reaction time shorter than the true one.
    pub misjudgments: u64,
    /// Planned with a reaction time shorter than the true one, crossing or not.
    pub misjudgments_global: u64,
}

impl Tally for OutcomeHistogram {
    fn merge(&mut self, other: Self) {
        self.iterations += other.iterations;
        self.cross_keep += other.cross_keep;
        self.cross_brake += other.cross_brake;
        self.out += other.out;
        self.collisions += other.collisions;
        self.misjudgments += other.misjudgments;
        self.misjudgments_global += other.misjudgments_global;
    }
}

impl OutcomeHistogram {
    pub fn count(&self, case: EntryCase) -> u64 {
        match case {
            EntryCase::CrossKeep => self.cross_keep,
            EntryCase::CrossBrake => self.cross_brake,
            EntryCase::Out => self.out,
        }
    }

    pub fn fraction(&self, count: u64) -> f64 {
        count as f64 / self.iterations as f64
    }

    pub fn case_fraction(&self, case: EntryCase) -> f64 {
        self.fraction(self.count(case))
    }

    pub fn standard_error(&self, count: u64) -> f64 {
        standard_error(self.fraction(count), self.iterations)
    }

    pub fn crossings(&self) -> u64 {
        self.cross_keep + self.cross_brake
    }

    /// CSV rows in output order.
    pub fn rows(&self) -> [(&'static str, u64); 6] {
        [
            (EntryCase::CrossKeep.as_str(), self.cross_keep),
            (EntryCase::CrossBrake.as_str(), self.cross_brake),
            (EntryCase::Out.as_str(), self.out),
            ("COLLISION", self.collisions),
            ("MISJUDGMENT", self.misjudgments),
            ("MISJUDGMENT_GLOBAL", self.misjudgments_global),
        ]
    }
}

/// One sampled encounter, decided with the perceived times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Encounter {
    pub vehicle: VehicleParams,
    pub perceived: ArrivalTimes,
    pub actual: ArrivalTimes,
    pub case: EntryCase,
    pub collision: bool,
}

/// Draws distance, speed and reaction time (in that order) from stream `(seed, k)`.
pub fn sample_encounter(profile: &CrossingProfile, seed: u64, k: u64) -> Result<Encounter> {
    let mut rng = rng_stream(seed, k);
    let d = profile.distance.sample(&mut rng);
    let v = profile.speed.sample(&mut rng);
    let t_r = profile.reaction.sample(&mut rng);
    let vehicle = VehicleParams::new(d, v, profile.decel, t_r)?;
    let actual = ArrivalTimes::compute(&profile.pedestrian, &vehicle)?;
    let perceived = match profile.assumed_reaction {
        Some(t) => ArrivalTimes::compute(&profile.pedestrian, &vehicle.with_reaction_time(t)?)?,
        None => actual,
    };
    let case = classify_case(&perceived);
    let arrival = match case {
        EntryCase::CrossKeep => actual.t_c,
        EntryCase::CrossBrake => actual.t_c_brake,
        EntryCase::Out => f64::INFINITY,
    };
    Ok(Encounter {
        vehicle,
        perceived,
        actual,
        case,
        collision: case.crosses() && arrival < actual.t_a,
    })
}

fn simulate(config: &SimConfig) -> Result<OutcomeHistogram> {
    check_iterations(config.iterations)?;
    config.profile.validate()?;
    let profile = &config.profile;
    let mut failure = std::sync::OnceLock::new();
    let mut hist = run_iterations(config.iterations, config.workers, OutcomeHistogram::default, |k, h| {
        let e = match sample_encounter(profile, config.seed, k) {
            Ok(e) => e,
            Err(err) => {
                let _ = failure.set(err);
                return;
            }
        };
        h.iterations += 1;
        match e.case {
            EntryCase::CrossKeep => h.cross_keep += 1,
            EntryCase::CrossBrake => h.cross_brake += 1,
            EntryCase::Out => h.out += 1,
        }
        h.collisions += u64::from(e.collision);
        if let Some(assumed) = profile.assumed_reaction {
            let misjudged = assumed < e.vehicle.reaction_time;
            h.misjudgments_global += u64::from(misjudged);
            h.misjudgments += u64::from(misjudged && e.case.crosses());
        }
    })?;
    if let Some(err) = failure.take() {
        return Err(err);
    }
    hist.profile = profile.name.clone();
    Ok(hist)
}

/// Classifies every sampled encounter into Cross/Keep, Cross/Brake or Out.
pub fn entry_histogram(config: &SimConfig) -> Result<OutcomeHistogram> {
    simulate(config)
}

/// Like [`entry_histogram`] but requires an assumed reaction time, so the counts of
/// misjudgments and resulting collisions are meaningful.
pub fn misjudgment_experiment(config: &SimConfig) -> Result<OutcomeHistogram> {
    if config.profile.assumed_reaction.is_none() {
        return Err(Error::config(
            "assumed_reaction",
            "misjudgment experiment needs an assumed reaction time",
        ));
    }
    simulate(config)
}
