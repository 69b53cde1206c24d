//! Seeded synthetic ground-truth graph over the default vocabulary.
//!
//! Every kind-compatible pair gets a plausibility level in `0..=3` from the
//! vocabulary tables plus Gumbel noise; each relation keeps the top-scoring
//! pairs up to its profile count. Coverage rules (one effect per action, a
//! place for every usable object, a room for every location) are honoured
//! before the top-N fill.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand_distr::{Distribution, Gumbel};

use super::vocab::{self, ObjectGroup, Target, Zone};
use super::{
    default_catalog, Catalog, Dataset, EntityId, EntityKind, GroundTruth, KgError, Relation,
    Triple, TripleKey,
};
use crate::rng::stream;

const NOISE_SCALE: f64 = 0.6;

/// Reference statistics per relation: `(relation, train instances,
/// train unique, valid/test unique, total unique)`.
pub const REFERENCE_COUNTS: [(Relation, u64, usize, usize, usize); 11] = [
    (Relation::HasEffect, 39_263, 24, 2, 28),
    (Relation::InverseActionOf, 29_956, 10, 1, 12),
    (Relation::InverseStateOf, 23_763, 13, 1, 15),
    (Relation::LocInRoom, 3_972, 78, 9, 96),
    (Relation::ObjCanBe, 45_075, 886, 110, 1106),
    (Relation::ObjInLoc, 9_461, 409, 51, 511),
    (Relation::ObjInRoom, 8_276, 289, 36, 361),
    (Relation::ObjOnLoc, 2_346, 269, 33, 335),
    (Relation::ObjUsedTo, 6_224, 76, 9, 94),
    (Relation::ObjHasState, 28_306, 431, 53, 537),
    (Relation::OperatesOn, 84_286, 1124, 140, 1404),
];

/// Per-relation unique-triple targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub counts: BTreeMap<Relation, usize>,
}

impl Profile {
    pub fn count(&self, r: Relation) -> usize {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Parses `Relation=count` pairs separated by commas, on top of the default.
    pub fn parse_overrides(input: &str) -> Result<Self, KgError> {
        let mut profile = Profile::default();
        for part in input.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| KgError::InvalidProfile(format!("expected Relation=count, got `{part}`")))?;
            let relation = name.trim().parse::<Relation>()?;
            let count = value
                .trim()
                .parse::<usize>()
                .map_err(|_| KgError::InvalidProfile(format!("bad count `{value}`")))?;
            profile.counts.insert(relation, count);
        }
        Ok(profile)
    }
}

impl Default for Profile {
    /// Reference totals, except `HasEffect` (one effect for each of the 34
    /// actions) and `InverseStateOf` (an even number, as it is symmetric).
    fn default() -> Self {
        let mut counts: BTreeMap<Relation, usize> = REFERENCE_COUNTS
            .iter()
            .map(|(r, _, _, _, total)| (*r, *total))
            .collect();
        counts.insert(Relation::HasEffect, vocab::ACTIONS.len());
        counts.insert(Relation::InverseStateOf, 14);
        Profile { counts }
    }
}

/// Lookup tables from entity ids to vocabulary metadata.
struct World<'a> {
    catalog: &'a Catalog,
    object_group: HashMap<EntityId, ObjectGroup>,
    location: HashMap<EntityId, &'static vocab::LocationSpec>,
    action_effect: HashMap<EntityId, EntityId>,
    action_group: HashMap<EntityId, vocab::ActionGroup>,
}

impl<'a> World<'a> {
    fn new(catalog: &'a Catalog) -> Self {
        let object_group = vocab::object_names()
            .into_iter()
            .map(|(n, g)| (catalog.lookup(&n).expect("default vocabulary"), g))
            .collect();
        let location = vocab::LOCATIONS
            .iter()
            .map(|l| (catalog.lookup(l.name).expect("default vocabulary"), l))
            .collect();
        let action_effect = vocab::ACTIONS
            .iter()
            .map(|(a, _, e)| (catalog.lookup(a).unwrap(), catalog.lookup(e).unwrap()))
            .collect();
        let action_group = vocab::ACTIONS
            .iter()
            .map(|(a, g, _)| (catalog.lookup(a).unwrap(), *g))
            .collect();
        Self {
            catalog,
            object_group,
            location,
            action_effect,
            action_group,
        }
    }

    fn named_level(&self, table: &[(&str, u8)], id: EntityId) -> u8 {
        let name = self.catalog.name(id);
        table
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, l)| *l)
            .unwrap_or(0)
    }

    fn room_level(&self, zone: Zone, room: EntityId) -> u8 {
        self.named_level(zone.rooms(), room)
    }

    fn home_level(&self, group: ObjectGroup, zone: Zone) -> u8 {
        group
            .home_zones()
            .iter()
            .find(|(z, _)| *z == zone)
            .map(|(_, l)| *l)
            .unwrap_or(0)
    }

    fn level(&self, r: Relation, h: EntityId, t: EntityId) -> u8 {
        match r {
            Relation::HasEffect => {
                if self.action_effect[&h] == t {
                    3
                } else {
                    let group = self.action_group[&h];
                    let related = self
                        .action_group
                        .iter()
                        .any(|(a, g)| *g == group && self.action_effect[a] == t);
                    u8::from(related)
                }
            }
            Relation::InverseActionOf => {
                let (a, b) = (self.catalog.name(h), self.catalog.name(t));
                if vocab::INVERSE_ACTIONS
                    .iter()
                    .any(|(x, y)| (*x == a && *y == b) || (*x == b && *y == a))
                {
                    3
                } else {
                    let (ea, eb) = (
                        self.catalog.name(self.action_effect[&h]),
                        self.catalog.name(self.action_effect[&t]),
                    );
                    u8::from(
                        vocab::INVERSE_STATES
                            .iter()
                            .any(|(x, y)| (*x == ea && *y == eb) || (*x == eb && *y == ea)),
                    )
                }
            }
            Relation::InverseStateOf => {
                let (a, b) = (self.catalog.name(h), self.catalog.name(t));
                if vocab::INVERSE_STATES
                    .iter()
                    .any(|(x, y)| (*x == a && *y == b) || (*x == b && *y == a))
                {
                    3
                } else {
                    0
                }
            }
            Relation::LocInRoom => {
                let loc = self.location[&h];
                let over = vocab::location_room_override(loc.name);
                if over.is_empty() {
                    self.room_level(loc.zone, t)
                } else {
                    self.named_level(over, t)
                }
            }
            Relation::ObjInLoc | Relation::ObjOnLoc => {
                let loc = self.location[&t];
                let allowed = if r == Relation::ObjInLoc {
                    loc.contains
                } else {
                    loc.supports
                };
                if allowed {
                    self.home_level(self.object_group[&h], loc.zone)
                } else {
                    0
                }
            }
            Relation::ObjInRoom => {
                let g = self.object_group[&h];
                Zone::ALL
                    .iter()
                    .map(|z| self.home_level(g, *z).min(self.room_level(*z, t)))
                    .max()
                    .unwrap_or(0)
            }
            Relation::ObjCanBe => self.named_level(self.object_group[&h].can_be(), t),
            Relation::ObjUsedTo => self.named_level(self.object_group[&h].used_to(), t),
            Relation::ObjHasState => self.named_level(self.object_group[&h].has_state(), t),
            Relation::OperatesOn => {
                let target = match self.catalog.kind(t) {
                    EntityKind::Object => Target::Group(self.object_group[&t]),
                    _ => Target::In(self.location[&t].zone),
                };
                self.object_group[&h]
                    .operates_on()
                    .iter()
                    .find(|(x, _)| *x == target)
                    .map(|(_, l)| *l)
                    .unwrap_or(0)
            }
        }
    }
}

struct Scored {
    key: TripleKey,
    score: f64,
}

fn candidates(world: &World<'_>, r: Relation, seed: u64) -> Vec<Scored> {
    let catalog = world.catalog;
    let heads: Vec<EntityId> = r
        .head_kinds()
        .iter()
        .flat_map(|k| catalog.of_kind(*k))
        .collect();
    let tails: Vec<EntityId> = r
        .tail_kinds()
        .iter()
        .flat_map(|k| catalog.of_kind(*k))
        .collect();
    let noise = Gumbel::new(0.0, NOISE_SCALE).expect("positive scale");
    let mut rng = stream(seed, &[0x5f_17, r.index() as u64]);
    let mut out = Vec::with_capacity(heads.len() * tails.len());
    for &h in &heads {
        for &t in &tails {
            if h == t || (r.is_symmetric() && h > t) {
                continue;
            }
            let score = f64::from(world.level(r, h, t)) + noise.sample(&mut rng);
            out.push(Scored {
                key: TripleKey::new(h, r, t),
                score,
            });
        }
    }
    out.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.key.cmp(&b.key)));
    out
}

/// Best-scoring candidate per head among `pool`, for heads in `heads`.
fn best_per_head(pool: &[&Vec<Scored>], heads: &HashSet<EntityId>) -> Vec<TripleKey> {
    let mut best: HashMap<EntityId, (f64, TripleKey)> = HashMap::new();
    for list in pool {
        for s in list.iter() {
            if !heads.contains(&s.key.head) {
                continue;
            }
            let entry = best.entry(s.key.head).or_insert((f64::NEG_INFINITY, s.key));
            if s.score > entry.0 {
                *entry = (s.score, s.key);
            }
        }
    }
    let mut out: Vec<TripleKey> = best.into_values().map(|(_, k)| k).collect();
    out.sort();
    out
}

fn take_top(
    list: &[Scored],
    forced: &[TripleKey],
    n: usize,
    r: Relation,
) -> Result<Vec<TripleKey>, KgError> {
    let forced: Vec<TripleKey> = forced.iter().filter(|k| k.relation == r).copied().collect();
    if forced.len() > n {
        return Err(KgError::ProfileInfeasible(format!(
            "{r}: coverage needs {} triples but the profile allows {n}",
            forced.len()
        )));
    }
    let mut chosen: HashSet<TripleKey> = forced.iter().copied().collect();
    let mut out = forced;
    for s in list {
        if out.len() == n {
            break;
        }
        if chosen.insert(s.key) {
            out.push(s.key);
        }
    }
    Ok(out)
}

/// Generates the ground truth; a pure function of `(seed, profile)`.
pub fn generate_synthetic_kg(seed: u64, profile: &Profile) -> Result<GroundTruth, KgError> {
    let catalog = default_catalog();
    let world = World::new(&catalog);

    let mut lists: BTreeMap<Relation, Vec<Scored>> = BTreeMap::new();
    for r in Relation::ALL {
        let list = candidates(&world, r, seed);
        let want = profile.count(r);
        let capacity = if r.is_symmetric() { list.len() * 2 } else { list.len() };
        if want > capacity {
            return Err(KgError::ProfileInfeasible(format!(
                "{r}: {want} unique triples requested but only {capacity} kind-compatible pairs exist"
            )));
        }
        if r.is_symmetric() && want % 2 == 1 {
            return Err(KgError::ProfileInfeasible(format!(
                "{r} is symmetric and needs an even count, got {want}"
            )));
        }
        lists.insert(r, list);
    }

    let mut triples: Vec<TripleKey> = Vec::new();
    let emit = |keys: Vec<TripleKey>, triples: &mut Vec<TripleKey>| {
        for k in keys {
            triples.push(k);
            if k.relation.is_symmetric() {
                triples.push(TripleKey::new(k.tail, k.relation, k.head));
            }
        }
    };

    // One effect per action.
    let actions: HashSet<EntityId> = catalog.of_kind(EntityKind::Action).into_iter().collect();
    let forced = best_per_head(&[&lists[&Relation::HasEffect]], &actions);
    let chosen = take_top(&lists[&Relation::HasEffect], &forced, profile.count(Relation::HasEffect), Relation::HasEffect)?;
    emit(chosen, &mut triples);

    for r in [Relation::InverseActionOf, Relation::InverseStateOf] {
        let chosen = take_top(&lists[&r], &[], profile.count(r) / 2, r)?;
        emit(chosen, &mut triples);
    }

    // A room for every location, when the profile can afford it.
    let locations: HashSet<EntityId> = catalog.of_kind(EntityKind::Location).into_iter().collect();
    let want = profile.count(Relation::LocInRoom);
    let forced = if want >= locations.len() {
        best_per_head(&[&lists[&Relation::LocInRoom]], &locations)
    } else {
        Vec::new()
    };
    emit(take_top(&lists[&Relation::LocInRoom], &forced, want, Relation::LocInRoom)?, &mut triples);

    // Tools: every cleaning tool is usable for something.
    let tools: HashSet<EntityId> = world
        .object_group
        .iter()
        .filter(|(_, g)| g.is_cleaning_tool())
        .map(|(id, _)| *id)
        .collect();
    let want = profile.count(Relation::ObjUsedTo);
    let forced = if want >= tools.len() {
        best_per_head(&[&lists[&Relation::ObjUsedTo]], &tools)
    } else {
        Vec::new()
    };
    let used_to = take_top(&lists[&Relation::ObjUsedTo], &forced, want, Relation::ObjUsedTo)?;
    let usable: HashSet<EntityId> = used_to.iter().map(|k| k.head).collect();
    emit(used_to, &mut triples);

    // A plausible place for every object (at least every usable one).
    let objects: HashSet<EntityId> = catalog.of_kind(EntityKind::Object).into_iter().collect();
    let place_budget = profile.count(Relation::ObjInLoc) + profile.count(Relation::ObjOnLoc);
    let cover = if place_budget >= objects.len() { &objects } else { &usable };
    let forced = best_per_head(
        &[&lists[&Relation::ObjInLoc], &lists[&Relation::ObjOnLoc]],
        cover,
    );
    for r in [Relation::ObjInLoc, Relation::ObjOnLoc] {
        emit(take_top(&lists[&r], &forced, profile.count(r), r)?, &mut triples);
    }

    for r in [
        Relation::ObjInRoom,
        Relation::ObjCanBe,
        Relation::ObjHasState,
        Relation::OperatesOn,
    ] {
        emit(take_top(&lists[&r], &[], profile.count(r), r)?, &mut triples);
    }

    GroundTruth::new(catalog, triples)
}

/// Train/valid/test fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub valid: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        Self {
            train: 0.8,
            valid: 0.1,
            test: 0.1,
        }
    }
}

impl SplitRatios {
    pub fn new(train: f64, valid: f64, test: f64) -> Result<Self, KgError> {
        let ratios = Self { train, valid, test };
        ratios.check()?;
        Ok(ratios)
    }

    pub fn parse(input: &str) -> Result<Self, KgError> {
        let parts: Vec<f64> = input
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| KgError::InvalidRatios(input.to_string()))?;
        match parts.as_slice() {
            [a, b, c] => Self::new(*a, *b, *c),
            _ => Err(KgError::InvalidRatios(input.to_string())),
        }
    }

    fn check(&self) -> Result<(), KgError> {
        let all = [self.train, self.valid, self.test];
        if all.iter().any(|r| !r.is_finite() || *r <= 0.0) {
            return Err(KgError::InvalidRatios(format!(
                "every split fraction must be positive, got {all:?}"
            )));
        }
        if (all.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(KgError::InvalidRatios(format!("fractions must sum to 1, got {all:?}")));
        }
        Ok(())
    }
}

/// How training weights are synthesized from unique triples.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightModel {
    /// Target mean observation count per unique train triple, per relation.
    pub mean_instances: BTreeMap<Relation, f64>,
    /// Zipf exponent over the shuffled train triples of a relation.
    pub exponent: f64,
}

impl Default for WeightModel {
    fn default() -> Self {
        Self {
            mean_instances: REFERENCE_COUNTS
                .iter()
                .map(|(r, inst, uniq, _, _)| (*r, *inst as f64 / *uniq as f64))
                .collect(),
            exponent: 1.0,
        }
    }
}

impl WeightModel {
    pub fn uniform() -> Self {
        Self {
            mean_instances: BTreeMap::new(),
            exponent: 0.0,
        }
    }

    fn weights(&self, r: Relation, n: usize) -> Vec<u32> {
        let mean = self.mean_instances.get(&r).copied().unwrap_or(1.0);
        let harmonic: f64 = (1..=n).map(|k| (k as f64).powf(-self.exponent)).sum();
        let scale = mean * n as f64 / harmonic;
        (1..=n)
            .map(|k| {
                let w = (scale * (k as f64).powf(-self.exponent)).round();
                w.clamp(1.0, f64::from(u32::MAX)) as u32
            })
            .collect()
    }
}

/// Per-relation stratified split: each relation is shuffled on its own
/// stream; valid and test take `floor(fraction * n)` triples each (at least
/// one), train keeps the rest and receives Zipf weights.
pub fn split_dataset(
    kg: &GroundTruth,
    ratios: SplitRatios,
    seed: u64,
    weights: &WeightModel,
) -> Result<Dataset, KgError> {
    ratios.check()?;
    let mut by_relation: BTreeMap<Relation, Vec<TripleKey>> = BTreeMap::new();
    for k in kg.triples() {
        by_relation.entry(k.relation).or_default().push(*k);
    }
    let (mut train, mut valid, mut test) = (Vec::new(), Vec::new(), Vec::new());
    for (r, mut keys) in by_relation {
        let n = keys.len();
        if n < 3 {
            return Err(KgError::TooFewForSplit {
                relation: r,
                available: n,
            });
        }
        let mut rng = stream(seed, &[0x5_9117, r.index() as u64]);
        keys.shuffle(&mut rng);
        let portion = |f: f64| ((f * n as f64 + 1e-9).floor() as usize).max(1);
        let n_valid = portion(ratios.valid);
        let n_test = portion(ratios.test);
        if n_valid + n_test >= n {
            return Err(KgError::TooFewForSplit {
                relation: r,
                available: n,
            });
        }
        valid.extend(keys[..n_valid].iter().map(|k| Triple::new(k.head, r, k.tail, 1)));
        test.extend(
            keys[n_valid..n_valid + n_test]
                .iter()
                .map(|k| Triple::new(k.head, r, k.tail, 1)),
        );
        let rest = &keys[n_valid + n_test..];
        let w = weights.weights(r, rest.len());
        train.extend(
            rest.iter()
                .zip(w)
                .map(|(k, w)| Triple::new(k.head, r, k.tail, w)),
        );
    }
    Dataset::new(kg.catalog().clone(), train, valid, test)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_close_to_reference_total() {
        let reference: usize = REFERENCE_COUNTS.iter().map(|c| c.4).sum();
        let total = Profile::default().total();
        let rel = (total as f64 - reference as f64).abs() / reference as f64;
        assert!(rel <= 0.05, "{total} vs {reference}");
    }

    #[test]
    fn infeasible_profile_rejected() {
        let mut p = Profile::default();
        p.counts.insert(Relation::LocInRoom, 45 * 4 + 1);
        assert!(matches!(
            generate_synthetic_kg(1, &p),
            Err(KgError::ProfileInfeasible(_))
        ));
        let mut p = Profile::default();
        p.counts.insert(Relation::HasEffect, 10);
        assert!(matches!(
            generate_synthetic_kg(1, &p),
            Err(KgError::ProfileInfeasible(_))
        ));
    }

    #[test]
    fn small_loc_in_room_profile() {
        let mut p = Profile::default();
        p.counts.insert(Relation::LocInRoom, 10);
        let kg = generate_synthetic_kg(3, &p).unwrap();
        let loc_in_room: Vec<_> = kg
            .triples()
            .iter()
            .filter(|k| k.relation == Relation::LocInRoom)
            .collect();
        assert_eq!(loc_in_room.len(), 10);
        for k in loc_in_room {
            assert_eq!(kg.catalog().kind(k.head), EntityKind::Location);
            assert_eq!(kg.catalog().kind(k.tail), EntityKind::Room);
        }
    }

    #[test]
    fn zipf_weights_hit_mean() {
        let wm = WeightModel::default();
        let w = wm.weights(Relation::ObjCanBe, 886);
        let total: u64 = w.iter().map(|x| u64::from(*x)).sum();
        let target = 45_075.0;
        assert!((total as f64 - target).abs() / target < 0.02, "{total}");
        assert!(w.windows(2).all(|p| p[0] >= p[1]));
        assert!(w.iter().all(|x| *x >= 1));
    }

    #[test]
    fn ratios_validated() {
        assert!(SplitRatios::new(1.0, 0.0, 0.0).is_err());
        assert!(SplitRatios::new(0.5, 0.3, 0.3).is_err());
        assert!(SplitRatios::parse("0.8,0.1,0.1").is_ok());
    }
}
