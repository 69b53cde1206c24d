use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::KgError;

/// Handle of an entity inside a [`Catalog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntityId(pub u32);

impl EntityId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    Room,
    Location,
    Object,
    Action,
    State,
}

impl EntityKind {
    pub const ALL: [EntityKind; 5] = [
        EntityKind::Room,
        EntityKind::Location,
        EntityKind::Object,
        EntityKind::Action,
        EntityKind::State,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntityKind::Room => "Room",
            EntityKind::Location => "Location",
            EntityKind::Object => "Object",
            EntityKind::Action => "Action",
            EntityKind::State => "State",
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntityKind {
    type Err = KgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntityKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| KgError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub name: String,
    pub kind: EntityKind,
}

/// Entity table. Ids are dense and assigned in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    entities: Vec<Entity>,
    by_name: HashMap<String, EntityId>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, kind: EntityKind) -> Result<EntityId, KgError> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(KgError::InvalidName(name.to_string()));
        }
        if self.by_name.contains_key(name) {
            return Err(KgError::DuplicateEntity(name.to_string()));
        }
        let id = EntityId(self.entities.len() as u32);
        self.entities.push(Entity {
            id,
            name: name.to_string(),
            kind,
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn get(&self, id: EntityId) -> Option<&Entity> {
        self.entities.get(id.index())
    }

    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id.index()]
    }

    pub fn name(&self, id: EntityId) -> &str {
        &self.entities[id.index()].name
    }

    pub fn kind(&self, id: EntityId) -> EntityKind {
        self.entities[id.index()].kind
    }

    pub fn lookup(&self, name: &str) -> Option<EntityId> {
        self.by_name.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<EntityId, KgError> {
        self.lookup(name)
            .ok_or_else(|| KgError::UnknownEntity(name.to_string()))
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn ids(&self) -> impl Iterator<Item = EntityId> + '_ {
        self.entities.iter().map(|e| e.id)
    }

    pub fn of_kind(&self, kind: EntityKind) -> Vec<EntityId> {
        self.entities
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.id)
            .collect()
    }

    pub fn count_kind(&self, kind: EntityKind) -> usize {
        self.entities.iter().filter(|e| e.kind == kind).count()
    }

    /// Catalog file: one `name<TAB>kind` row per entity, `#` comments allowed.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# name\tkind\n");
        for e in &self.entities {
            out.push_str(&e.name);
            out.push('\t');
            out.push_str(e.kind.name());
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, KgError> {
        let mut catalog = Catalog::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = trimmed.split('\t').collect();
            if cols.len() != 2 {
                return Err(KgError::Malformed {
                    line: line_no,
                    reason: format!("expected 2 columns, found {}", cols.len()),
                });
            }
            let kind = cols[1].parse::<EntityKind>().map_err(|_| KgError::Malformed {
                line: line_no,
                reason: format!("unknown entity kind `{}`", cols[1]),
            })?;
            catalog.add(cols[0], kind).map_err(|e| KgError::Malformed {
                line: line_no,
                reason: e.to_string(),
            })?;
        }
        Ok(catalog)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let mut c = Catalog::new();
        c.add("cup", EntityKind::Object).unwrap();
        assert!(matches!(
            c.add("cup", EntityKind::Location),
            Err(KgError::DuplicateEntity(_))
        ));
    }

    #[test]
    fn tsv_round_trip() {
        let mut c = Catalog::new();
        c.add("kitchen", EntityKind::Room).unwrap();
        c.add("sink", EntityKind::Location).unwrap();
        c.add("sponge", EntityKind::Object).unwrap();
        let back = Catalog::from_tsv(&c.to_tsv()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn bad_kind_reports_line() {
        let err = Catalog::from_tsv("# header\ncup\tObject\nsink\tPlace\n").unwrap_err();
        assert!(matches!(err, KgError::Malformed { line: 3, .. }));
    }
}
