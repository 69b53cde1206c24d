use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{EntityKind, KgError};

/// The eleven relation types of the household knowledge graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    HasEffect,
    InverseActionOf,
    InverseStateOf,
    LocInRoom,
    ObjCanBe,
    ObjInLoc,
    ObjInRoom,
    ObjOnLoc,
    ObjUsedTo,
    ObjHasState,
    OperatesOn,
}

const OBJECT_OR_LOCATION: &[EntityKind] = &[EntityKind::Object, EntityKind::Location];

impl Relation {
    pub const ALL: [Relation; 11] = [
        Relation::HasEffect,
        Relation::InverseActionOf,
        Relation::InverseStateOf,
        Relation::LocInRoom,
        Relation::ObjCanBe,
        Relation::ObjInLoc,
        Relation::ObjInRoom,
        Relation::ObjOnLoc,
        Relation::ObjUsedTo,
        Relation::ObjHasState,
        Relation::OperatesOn,
    ];

    /// Dense index in `0..11`, matching the order of [`Relation::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(idx: usize) -> Option<Relation> {
        Relation::ALL.get(idx).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::HasEffect => "HasEffect",
            Relation::InverseActionOf => "InverseActionOf",
            Relation::InverseStateOf => "InverseStateOf",
            Relation::LocInRoom => "LocInRoom",
            Relation::ObjCanBe => "ObjCanBe",
            Relation::ObjInLoc => "ObjInLoc",
            Relation::ObjInRoom => "ObjInRoom",
            Relation::ObjOnLoc => "ObjOnLoc",
            Relation::ObjUsedTo => "ObjUsedTo",
            Relation::ObjHasState => "ObjHasState",
            Relation::OperatesOn => "OperatesOn",
        }
    }

    pub fn head_kinds(self) -> &'static [EntityKind] {
        use EntityKind::*;
        match self {
            Relation::HasEffect | Relation::InverseActionOf => &[Action],
            Relation::InverseStateOf => &[State],
            Relation::LocInRoom => &[Location],
            Relation::ObjCanBe
            | Relation::ObjInLoc
            | Relation::ObjInRoom
            | Relation::ObjOnLoc
            | Relation::ObjUsedTo
            | Relation::ObjHasState
            | Relation::OperatesOn => &[Object],
        }
    }

    pub fn tail_kinds(self) -> &'static [EntityKind] {
        use EntityKind::*;
        match self {
            Relation::HasEffect | Relation::InverseStateOf | Relation::ObjHasState => &[State],
            Relation::InverseActionOf | Relation::ObjCanBe | Relation::ObjUsedTo => &[Action],
            Relation::LocInRoom | Relation::ObjInRoom => &[Room],
            Relation::ObjInLoc | Relation::ObjOnLoc => &[Location],
            Relation::OperatesOn => OBJECT_OR_LOCATION,
        }
    }

    /// Whether the relation is its own converse (`(a, r, b)` iff `(b, r, a)`).
    pub fn is_symmetric(self) -> bool {
        matches!(self, Relation::InverseActionOf | Relation::InverseStateOf)
    }

    pub fn admits(self, head: EntityKind, tail: EntityKind) -> bool {
        self.head_kinds().contains(&head) && self.tail_kinds().contains(&tail)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = KgError;

    /// Accepts the canonical names plus the `ObjAtLoc` / `ActionHasEffect`
    /// spellings used for the generalization queries.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ObjAtLoc" => return Ok(Relation::ObjInLoc),
            "ActionHasEffect" => return Ok(Relation::HasEffect),
            _ => {}
        }
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| KgError::UnknownRelation(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for r in Relation::ALL {
            assert_eq!(r.name().parse::<Relation>().unwrap(), r);
            assert_eq!(Relation::from_index(r.index()), Some(r));
        }
        assert!("IsNear".parse::<Relation>().is_err());
    }

    #[test]
    fn signatures() {
        use EntityKind::*;
        assert!(Relation::HasEffect.admits(Action, State));
        assert!(!Relation::HasEffect.admits(Object, State));
        assert!(Relation::ObjUsedTo.admits(Object, Action));
        assert!(Relation::OperatesOn.admits(Object, Object));
        assert!(Relation::OperatesOn.admits(Object, Location));
        assert!(!Relation::OperatesOn.admits(Object, Room));
    }
}
