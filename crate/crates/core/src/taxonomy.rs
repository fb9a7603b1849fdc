//! The closed catalog of academic grades.
//!
//! Grades are grouped into five tracks. Within a track, grades are ranked by
//! seniority, most junior first. The same name can occur in more than one
//! track ("assistant" is both a researcher and an associate grade), so a
//! grade is identified by its `(name, track)` pair.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GradeTrack {
    Scientist,
    Researcher,
    ScientificResearch,
    Teaching,
    Associate,
}

impl GradeTrack {
    pub const ALL: [GradeTrack; 5] = [
        GradeTrack::Scientist,
        GradeTrack::Researcher,
        GradeTrack::ScientificResearch,
        GradeTrack::Teaching,
        GradeTrack::Associate,
    ];

    /// Canonical grade names of this track, most junior first.
    pub fn grades(self) -> &'static [&'static str] {
        match self {
            GradeTrack::Scientist => &[
                "research associate",
                "senior research associate",
                "research advisor",
            ],
            GradeTrack::Researcher => &[
                "expert assistant",
                "younger assistant",
                "assistant",
                "senior assistant",
            ],
            GradeTrack::ScientificResearch => &[
                "assistant professor",
                "associate professor",
                "full professor",
                "professor emeritus",
            ],
            GradeTrack::Teaching => &[
                "lecturer",
                "senior lecturer",
                "professor of high school",
                "lector",
                "senior lector",
                "repetiteur",
                "senior repetiteur",
            ],
            GradeTrack::Associate => &[
                "expert assistant",
                "younger assistant",
                "assistant",
                "high school assistant",
                "senior assistant",
            ],
        }
    }

    /// Tracks whose posts are filled by open calls and appointment procedures.
    pub fn is_appointable(self) -> bool {
        matches!(
            self,
            GradeTrack::ScientificResearch | GradeTrack::Teaching | GradeTrack::Associate
        )
    }
}

impl FromStr for GradeTrack {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .collect::<String>()
            .to_lowercase();
        GradeTrack::ALL
            .into_iter()
            .find(|t| format!("{t:?}").to_lowercase() == key)
            .ok_or_else(|| Error::Validation(format!("unknown grade track {s:?}")))
    }
}

/// One catalog entry. Only obtainable from the catalog, so every value is a
/// real `(name, track)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AcademicGrade {
    name: &'static str,
    track: GradeTrack,
    rank: u8,
}

impl AcademicGrade {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn track(&self) -> GradeTrack {
        self.track
    }

    pub fn rank_in_track(&self) -> u8 {
        self.rank
    }

    /// Exact lookup of a track-qualified grade.
    pub fn lookup(name: &str, track: GradeTrack) -> Result<Self> {
        let wanted = normalize(name);
        track
            .grades()
            .iter()
            .position(|g| *g == wanted)
            .map(|rank| AcademicGrade {
                name: track.grades()[rank],
                track,
                rank: rank as u8,
            })
            .ok_or(Error::UnknownGrade(wanted))
    }
}

impl fmt::Display for AcademicGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:?})", self.name, self.track)
    }
}

/// All catalog entries, track by track, each track in seniority order.
pub fn catalog() -> impl Iterator<Item = AcademicGrade> {
    GradeTrack::ALL.into_iter().flat_map(|track| {
        track
            .grades()
            .iter()
            .enumerate()
            .map(move |(rank, name)| AcademicGrade {
                name,
                track,
                rank: rank as u8,
            })
    })
}

/// Lower-cases and collapses internal whitespace.
pub fn normalize(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Every catalog entry carrying the given name, in track order.
pub fn classify_grade(name: &str) -> Result<Vec<AcademicGrade>> {
    let wanted = normalize(name);
    let found: Vec<_> = catalog().filter(|g| g.name == wanted).collect();
    if found.is_empty() {
        return Err(Error::UnknownGrade(wanted));
    }
    Ok(found)
}

pub fn compare_seniority(a: &AcademicGrade, b: &AcademicGrade) -> Result<Ordering> {
    if a.track != b.track {
        return Err(Error::TrackMismatch {
            left: a.track,
            right: b.track,
        });
    }
    Ok(a.rank.cmp(&b.rank))
}

/// The catalog as line-delimited JSON, one `{name, track, rank_in_track}`
/// object per line. This is the content of the bundled seed file.
pub fn catalog_jsonl() -> String {
    let mut out = String::new();
    for grade in catalog() {
        out.push_str(&serde_json::to_string(&grade).expect("grade serializes"));
        out.push('\n');
    }
    out
}

/// The bundled seed file.
pub const SEED_FILE: &str = include_str!("../data/grade_catalog.jsonl");

/// Parses a seed file and checks every record against the catalog.
pub fn load_seed(text: &str) -> Result<Vec<AcademicGrade>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str::<AcademicGrade>(line)
                .map_err(|e| Error::Validation(format!("seed line {}: {e}", i + 1)))
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct GradeRepr {
    name: String,
    track: GradeTrack,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank_in_track: Option<u8>,
}

impl Serialize for AcademicGrade {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GradeRepr {
            name: self.name.to_string(),
            track: self.track,
            rank_in_track: Some(self.rank),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AcademicGrade {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GradeRepr::deserialize(deserializer)?;
        let grade =
            AcademicGrade::lookup(&repr.name, repr.track).map_err(serde::de::Error::custom)?;
        match repr.rank_in_track {
            Some(rank) if rank != grade.rank => Err(serde::de::Error::custom(format!(
                "{} is rank {} in {:?}, not {rank}",
                grade.name, grade.rank, grade.track
            ))),
            _ => Ok(grade),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grade(name: &str, track: GradeTrack) -> AcademicGrade {
        AcademicGrade::lookup(name, track).unwrap()
    }

    #[test]
    fn assistant_professor_is_junior_scientific_research_grade() {
        let found = classify_grade("assistant professor").unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].track(), GradeTrack::ScientificResearch);
        assert_eq!(found[0].rank_in_track(), 0);
    }

    #[test]
    fn expert_assistant_lives_in_two_tracks() {
        let tracks: Vec<_> = classify_grade("expert assistant")
            .unwrap()
            .iter()
            .map(|g| g.track())
            .collect();
        assert_eq!(tracks, vec![GradeTrack::Researcher, GradeTrack::Associate]);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert_eq!(
            classify_grade("wizard"),
            Err(Error::UnknownGrade("wizard".into()))
        );
        assert!(classify_grade("").is_err());
    }

    #[test]
    fn input_is_normalized() {
        let found = classify_grade("  Senior   LECTURER ").unwrap();
        assert_eq!(found[0].name(), "senior lecturer");
    }

    #[test]
    fn seniority_examples() {
        let lecturer = grade("lecturer", GradeTrack::Teaching);
        let senior = grade("senior lecturer", GradeTrack::Teaching);
        let ap = grade("assistant professor", GradeTrack::ScientificResearch);
        let advisor = grade("research advisor", GradeTrack::Scientist);
        assert_eq!(compare_seniority(&lecturer, &senior), Ok(Ordering::Less));
        assert_eq!(compare_seniority(&ap, &ap), Ok(Ordering::Equal));
        assert!(matches!(
            compare_seniority(&lecturer, &advisor),
            Err(Error::TrackMismatch { .. })
        ));
    }

    #[test]
    fn emeritus_is_most_senior() {
        let emeritus = grade("professor emeritus", GradeTrack::ScientificResearch);
        for other in
            catalog().filter(|g| g.track() == GradeTrack::ScientificResearch && *g != emeritus)
        {
            assert_eq!(compare_seniority(&other, &emeritus), Ok(Ordering::Less));
        }
    }

    #[test]
    fn bundled_seed_matches_catalog() {
        assert_eq!(SEED_FILE, catalog_jsonl());
        assert_eq!(load_seed(SEED_FILE).unwrap(), catalog().collect::<Vec<_>>());
    }

    #[test]
    fn deserialization_rejects_off_catalog_pairs() {
        let bad = r#"{"name":"lecturer","track":"Associate"}"#;
        assert!(serde_json::from_str::<AcademicGrade>(bad).is_err());
        let wrong_rank = r#"{"name":"lecturer","track":"Teaching","rank_in_track":3}"#;
        assert!(serde_json::from_str::<AcademicGrade>(wrong_rank).is_err());
        let ok = r#"{"name":"Lecturer","track":"Teaching"}"#;
        assert_eq!(
            serde_json::from_str::<AcademicGrade>(ok).unwrap().name(),
            "lecturer"
        );
    }

    #[test]
    fn track_parsing() {
        assert_eq!(
            "scientific-research".parse::<GradeTrack>(),
            Ok(GradeTrack::ScientificResearch)
        );
        assert_eq!("Teaching".parse::<GradeTrack>(), Ok(GradeTrack::Teaching));
        assert!("clergy".parse::<GradeTrack>().is_err());
    }
}
