use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AnalysisError;
use crate::factors::{Direction, FactorMatrix};

const EXCLUDED_KEY: &str = "excluded";

/// Groups of aspects analysed together. Categories keep their file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspectCategoryMap {
    categories: Vec<(String, BTreeSet<String>)>,
    excluded: BTreeSet<String>,
}

impl Default for AspectCategoryMap {
    /// Content, publisher and operator related aspects of academic books;
    /// "quality" co-occurs with everything and is left out.
    fn default() -> Self {
        let set = |words: &[&str]| words.iter().map(|w| w.to_string()).collect::<BTreeSet<_>>();
        Self {
            categories: vec![
                ("content_related".into(), set(&["content", "translation"])),
                ("publisher_related".into(), set(&["version", "price", "paper", "printing", "appearance"])),
                ("operator_related".into(), set(&["packaging", "logistics"])),
            ],
            excluded: set(&["quality"]),
        }
    }
}

impl AspectCategoryMap {
    pub fn new(
        categories: Vec<(String, BTreeSet<String>)>,
        excluded: BTreeSet<String>,
    ) -> Result<Self, AnalysisError> {
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut names: BTreeSet<&str> = BTreeSet::new();
        for (name, aspects) in &categories {
            if name == EXCLUDED_KEY || !names.insert(name) {
                return Err(AnalysisError::InvalidCategoryMap(format!("invalid or repeated category name {name:?}")));
            }
            for aspect in aspects {
                if !seen.insert(aspect) || excluded.contains(aspect) {
                    return Err(AnalysisError::InvalidCategoryMap(format!("aspect {aspect:?} is assigned twice")));
                }
            }
        }
        Ok(Self { categories, excluded })
    }

    pub fn load(path: &Path) -> Result<Self, AnalysisError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AnalysisError::InvalidCategoryMap(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| AnalysisError::InvalidCategoryMap(e.to_string()))
    }

    pub fn categories(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.categories.iter().map(|(n, a)| (n.as_str(), a))
    }

    pub fn excluded(&self) -> &BTreeSet<String> {
        &self.excluded
    }

    pub fn category_of(&self, aspect: &str) -> Option<&str> {
        self.categories.iter().find(|(_, a)| a.contains(aspect)).map(|(n, _)| n.as_str())
    }
}

impl Serialize for AspectCategoryMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.categories.len() + 1))?;
        for (name, aspects) in &self.categories {
            map.serialize_entry(name, aspects)?;
        }
        map.serialize_entry(EXCLUDED_KEY, &self.excluded)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for AspectCategoryMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct OrderedMap;

        impl<'de> Visitor<'de> for OrderedMap {
            type Value = AspectCategoryMap;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping category names to aspect lists")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut categories = Vec::new();
                let mut excluded = BTreeSet::new();
                while let Some((name, aspects)) = access.next_entry::<String, BTreeSet<String>>()? {
                    if name == EXCLUDED_KEY {
                        excluded = aspects;
                    } else {
                        categories.push((name, aspects));
                    }
                }
                AspectCategoryMap::new(categories, excluded).map_err(serde::de::Error::custom)
            }
        }

        d.deserialize_map(OrderedMap)
    }
}

/// Averages per-aspect columns into per-category columns. Each category
/// keeps only its members present in `aspect_values`; excluded and
/// uncategorized aspects are ignored.
pub fn group_aspect_values(aspect_values: &FactorMatrix, map: &AspectCategoryMap) -> Result<FactorMatrix, AnalysisError> {
    let mut names = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (name, aspects) in map.categories() {
        let columns: Vec<usize> = aspect_values
            .factor_names
            .iter()
            .enumerate()
            .filter(|(_, a)| aspects.contains(*a))
            .map(|(j, _)| j)
            .collect();
        if columns.is_empty() {
            return Err(AnalysisError::EmptyCategory(name.to_string()));
        }
        names.push(name.to_string());
        members.push(columns);
    }
    let values = aspect_values
        .values
        .iter()
        .map(|row| members.iter().map(|cols| cols.iter().map(|&j| row[j]).sum::<f64>() / cols.len() as f64).collect())
        .collect();
    FactorMatrix::new(aspect_values.book_ids.clone(), names.clone(), values, vec![Direction::Benefit; names.len()])
        .map_err(|e| AnalysisError::InvalidCategoryMap(e.to_string()))
}
