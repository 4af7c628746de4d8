//! Named example curves. Coefficients and singular points are drawn from a
//! fixed seed, so each entry is one reproducible curve per prime.

use wahl_core::curvemodel::{Gonality, PlaneCurve};
use wahl_core::exactcore::PrimeField;

use crate::error::CliResult;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub degree: usize,
    pub multiplicities: &'static [usize],
    pub gonality: Gonality,
    pub seed: u64,
}

impl CorpusEntry {
    pub fn genus(&self) -> usize {
        let d = self.degree;
        (d - 1) * (d - 2) / 2 - self.multiplicities.iter().map(|m| m * (m - 1) / 2).sum::<usize>()
    }

    /// Number of singular points of the plane model.
    pub fn a(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn curve(&self, field: PrimeField) -> CliResult<PlaneCurve> {
        self.curve_with_seed(field, self.seed)
    }

    /// Another member of the same family.
    pub fn curve_with_seed(&self, field: PrimeField, seed: u64) -> CliResult<PlaneCurve> {
        Ok(PlaneCurve::seeded(
            self.name,
            field,
            self.degree,
            self.multiplicities,
            self.gonality,
            seed,
        )?)
    }
}

const fn entry(
    name: &'static str,
    degree: usize,
    multiplicities: &'static [usize],
    gonality: Gonality,
    seed: u64,
) -> CorpusEntry {
    CorpusEntry {
        name,
        degree,
        multiplicities,
        gonality,
        seed,
    }
}

pub const CORPUS: &[CorpusEntry] = &[
    entry("hyperell-5-3", 5, &[3], Gonality::Hyperelliptic, 53),
    entry("hyperell-6-4", 6, &[4], Gonality::Hyperelliptic, 64),
    entry("trigonal-6-3", 6, &[3], Gonality::Trigonal, 63),
    entry("tetragonal-6-node", 6, &[2], Gonality::Tetragonal, 62),
    entry("smooth-plane-7", 7, &[], Gonality::Plane(7), 7),
    entry("nodal-8-1", 8, &[2], Gonality::Plane(8), 81),
    entry("nodal-8-2", 8, &[2, 2], Gonality::Plane(8), 82),
    entry("nodal-7-3", 7, &[2, 2, 2], Gonality::Plane(7), 73),
    entry("ci-6-5node", 6, &[2, 2, 2, 2, 2], Gonality::Tetragonal, 65),
    entry("trigonal-5-node", 5, &[2], Gonality::Trigonal, 52),
    entry("smooth-plane-5", 5, &[], Gonality::Plane(5), 5),
    entry("tetragonal-7-3-3node", 7, &[3, 2, 2, 2], Gonality::Tetragonal, 733),
];

pub fn lookup(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        for (i, e) in CORPUS.iter().enumerate() {
            assert!(CORPUS[..i].iter().all(|o| o.name != e.name), "{}", e.name);
        }
        assert!(CORPUS.len() >= 7);
    }

    #[test]
    fn declared_genera() {
        let g = |n| lookup(n).unwrap().genus();
        assert_eq!(g("hyperell-5-3"), 3);
        assert_eq!(g("hyperell-6-4"), 4);
        assert_eq!(g("trigonal-6-3"), 7);
        assert_eq!(g("tetragonal-6-node"), 9);
        assert_eq!(g("smooth-plane-7"), 15);
        assert_eq!(g("nodal-8-1"), 20);
        assert_eq!(g("nodal-8-2"), 19);
        assert_eq!(g("nodal-7-3"), 12);
        assert_eq!(g("tetragonal-7-3-3node"), 9);
    }

    #[test]
    fn every_entry_loads() {
        let field = PrimeField::random(17);
        for e in CORPUS {
            let c = e.curve(field).unwrap();
            assert_eq!(c.genus(), e.genus(), "{}", e.name);
        }
    }
}
