//! Arrival times at the conflict point and the pedestrian/vehicle entry game.
//!
//! Deceleration is stored as a positive magnitude `a`. Braking from speed `v` over
//! distance `d` reaches the conflict point at the smallest root of
//! `d = v t - a t² / 2`, i.e. `t = (v - sqrt(v² - 2ad)) / a`, which is the signed-
//! acceleration form `(sqrt(v² + 2ad) - v) / a` with `a < 0` rewritten. It is
//! evaluated as `2d / (v + sqrt(v² - 2ad))` to avoid cancellation when `2ad ≪ v²`.
//! A human driver first covers `d_r = v t_r` at constant speed.

use crate::error::{Error, Result};
use crate::sequential::{backward_induction, GameTree, StrategyMap, TreeBuilder};
use std::fmt;

/// Stand-in for an infinite braking arrival time in leaf payoffs, in seconds.
pub const INFINITE_ARRIVAL_SENTINEL: f64 = 1.0e4;

pub const PEDESTRIAN: usize = 0;
pub const VEHICLE: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PedestrianParams {
    /// m
    pub lane_width: f64,
    /// m/s
    pub walk_speed: f64,
}

impl PedestrianParams {
    pub fn new(lane_width: f64, walk_speed: f64) -> Result<Self> {
        positive("lane_width", lane_width)?;
        positive("walk_speed", walk_speed)?;
        Ok(Self { lane_width, walk_speed })
    }
}

impl Default for PedestrianParams {
    /// One 3.75 m lane walked at 1.4 m/s.
    fn default() -> Self {
        Self {
            lane_width: 3.75,
            walk_speed: 1.4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    /// Distance to the conflict point, m.
    pub distance: f64,
    /// m/s
    pub speed: f64,
    /// Braking deceleration magnitude, m/s².
    pub decel: f64,
    /// Driver reaction time, s (0 for an automated vehicle).
    pub reaction_time: f64,
}

impl VehicleParams {
    pub fn new(distance: f64, speed: f64, decel: f64, reaction_time: f64) -> Result<Self> {
        positive("distance", distance)?;
        positive("speed", speed)?;
        positive("decel", decel)?;
        if !(reaction_time.is_finite() && reaction_time >= 0.0) {
            return Err(Error::Domain(format!(
                "reaction_time must be >= 0, got {reaction_time}"
            )));
        }
        Ok(Self {
            distance,
            speed,
            decel,
            reaction_time,
        })
    }

    pub fn with_reaction_time(self, reaction_time: f64) -> Result<Self> {
        Self::new(self.distance, self.speed, self.decel, reaction_time)
    }
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and > 0, got {value}")))
    }
}

/// Time for the pedestrian to cross the lane.
pub fn crossing_time(ped: &PedestrianParams) -> Result<f64> {
    positive("lane_width", ped.lane_width)?;
    positive("walk_speed", ped.walk_speed)?;
    Ok(ped.lane_width / ped.walk_speed)
}

/// Arrival time without braking, `d / v`.
pub fn arrival_keep(veh: &VehicleParams) -> Result<f64> {
    positive("distance", veh.distance)?;
    positive("speed", veh.speed)?;
    Ok(veh.distance / veh.speed)
}

/// Arrival time when braking after the reaction delay; `+inf` when the vehicle
/// stops short of the conflict point. If the reaction distance already covers `d`
/// the vehicle passes before braking starts and arrives at `d / v`.
pub fn arrival_brake(veh: &VehicleParams) -> Result<f64> {
    let VehicleParams {
        distance: d,
        speed: v,
        decel: a,
        reaction_time: t_r,
    } = VehicleParams::new(veh.distance, veh.speed, veh.decel, veh.reaction_time)?;
    let reaction_distance = v * t_r;
    if t_r > 0.0 && reaction_distance >= d {
        return Ok(d / v);
    }
    let remaining = d - reaction_distance;
    let discriminant = v * v - 2.0 * a * remaining;
    if discriminant < 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(t_r + 2.0 * remaining / (v + discriminant.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalTimes {
    /// Pedestrian crossing time.
    pub t_a: f64,
    /// Vehicle arrival without braking.
    pub t_c: f64,
    /// Vehicle arrival when braking (reaction delay included), possibly `+inf`.
    pub t_c_brake: f64,
}

impl ArrivalTimes {
    pub fn compute(ped: &PedestrianParams, veh: &VehicleParams) -> Result<Self> {
        Ok(Self {
            t_a: crossing_time(ped)?,
            t_c: arrival_keep(veh)?,
            t_c_brake: arrival_brake(veh)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntryCase {
    CrossKeep,
    CrossBrake,
    Out,
}

impl EntryCase {
    pub const ALL: [EntryCase; 3] = [EntryCase::CrossKeep, EntryCase::CrossBrake, EntryCase::Out];

    pub fn as_str(self) -> &'static str {
        match self {
            EntryCase::CrossKeep => "CROSS_KEEP",
            EntryCase::CrossBrake => "CROSS_BRAKE",
            EntryCase::Out => "OUT",
        }
    }

    pub fn crosses(self) -> bool {
        self != EntryCase::Out
    }
}

impl fmt::Display for EntryCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Equilibrium case of the entry game. Boundary ties fall on the braking-safe side:
/// `t_a = t_c` is Cross/Brake and `t_a = t_c_brake` is Out.
pub fn classify_case(t: &ArrivalTimes) -> EntryCase {
    if t.t_a < t.t_c {
        EntryCase::CrossKeep
    } else if t.t_a < t.t_c_brake {
        EntryCase::CrossBrake
    } else {
        EntryCase::Out
    }
}

/// Entry game instance: the tree plus the times it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryGame {
    pub tree: GameTree,
    /// Times as the pedestrian evaluates them (with the assumed reaction time, if any).
    pub perceived: ArrivalTimes,
    /// Times the vehicle actually achieves.
    pub actual: ArrivalTimes,
}

/// Realized play of an entry game.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryOutcome {
    pub case: EntryCase,
    pub strategy: StrategyMap,
    /// Crossed and the vehicle actually reached the conflict point before the pedestrian cleared it.
    pub collision: bool,
}

/// Builds the entry game: the pedestrian picks Out or Cross, then the vehicle picks
/// Brake or Keep. Leaf payoffs `(pedestrian, vehicle)`:
///
/// * Out → `(t_a - t_c_brake, 0)`
/// * Cross/Brake → `(t_c_brake - t_a, 0)`
/// * Cross/Keep → `(t_c - t_a, t_c - t_a)`
///
/// Out and Brake are listed first so first-listed tie breaking lands on the safe side.
/// An infinite `t_c_brake` is replaced by [`INFINITE_ARRIVAL_SENTINEL`].
///
/// With `assumed_reaction_time`, the pedestrian's payoffs use arrival times computed
/// with that reaction time, while [`EntryGame::actual`] keeps the vehicle's true times.
pub fn build_entry_game(
    ped: &PedestrianParams,
    veh: &VehicleParams,
    assumed_reaction_time: Option<f64>,
) -> Result<EntryGame> {
    let actual = ArrivalTimes::compute(ped, veh)?;
    let perceived = match assumed_reaction_time {
        Some(t_r) => ArrivalTimes::compute(ped, &veh.with_reaction_time(t_r)?)?,
        None => actual,
    };
    let brake = perceived.t_c_brake.min(INFINITE_ARRIVAL_SENTINEL);
    let ArrivalTimes { t_a, t_c, .. } = perceived;

    let mut b = TreeBuilder::new();
    let out = b.leaf([t_a - brake, 0.0]);
    let cross_brake = b.leaf([brake - t_a, 0.0]);
    let cross_keep = b.leaf([t_c - t_a, t_c - t_a]);
    let vehicle = b.decision(VEHICLE, vec![("Brake", cross_brake), ("Keep", cross_keep)]);
    let root = b.decision(PEDESTRIAN, vec![("Out", out), ("Cross", vehicle)]);
    Ok(EntryGame {
        tree: b.build(root)?,
        perceived,
        actual,
    })
}

impl EntryGame {
    /// Solves the tree by backward induction and checks the chosen path against the
    /// vehicle's true arrival time.
    pub fn outcome(&self) -> EntryOutcome {
        let strategy = backward_induction(&self.tree);
        let case = match strategy.path.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
            ["Cross", "Keep"] => EntryCase::CrossKeep,
            ["Cross", "Brake"] => EntryCase::CrossBrake,
            _ => EntryCase::Out,
        };
        let arrival = match case {
            EntryCase::CrossKeep => self.actual.t_c,
            EntryCase::CrossBrake => self.actual.t_c_brake,
            EntryCase::Out => f64::INFINITY,
        };
        EntryOutcome {
            case,
            strategy,
            collision: case.crosses() && arrival < self.actual.t_a,
        }
    }
}
