//! C-sequence providers: an assignment `β ↦ C_β` of closed cofinal sets.
//!
//! The construction being modelled fixes some C-sequence without naming one,
//! so the menu here (canonical ladders, full intervals, hand-written tables
//! over either) is a stand-in. Every provider obeys `C_0 = ∅` and
//! `C_{β+1} = {β}`; only limits vary.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::closed_set::ClosedSet;
use crate::error::{Error, Result};
use crate::ordinal::{Kind, Ordinal};

/// Source of the sets `C_β` along which walks descend.
pub trait CSequence: Send + Sync {
    /// `C_β`. Callers keep `β` below [`CSequence::universe`].
    fn cseq(&self, beta: &Ordinal) -> ClosedSet;

    /// Human-readable identifier, used in reports and memo keys.
    fn name(&self) -> String;

    /// Ceiling on the ordinals this provider answers for.
    fn universe(&self) -> &Ordinal;

    /// Errors when `x` lies at or above the universe bound.
    fn check_universe(&self, x: &Ordinal) -> Result<()> {
        if x >= self.universe() {
            return Err(Error::OutOfUniverse {
                value: x.to_string(),
                bound: self.universe().to_string(),
            });
        }
        Ok(())
    }
}

impl<T: CSequence + ?Sized> CSequence for &T {
    fn cseq(&self, beta: &Ordinal) -> ClosedSet {
        (**self).cseq(beta)
    }
    fn name(&self) -> String {
        (**self).name()
    }
    fn universe(&self) -> &Ordinal {
        (**self).universe()
    }
}

/// What a provider answers at limits without a table entry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProviderMode {
    /// `C_β = {β[n] : n ≥ 1}`.
    #[default]
    Fundamental,
    /// `C_β = {γ : 0 < γ < β}`.
    Full,
}

impl FromStr for ProviderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fundamental" => Ok(ProviderMode::Fundamental),
            "full" => Ok(ProviderMode::Full),
            other => Err(Error::Config(format!("unknown provider mode '{other}'"))),
        }
    }
}

impl fmt::Display for ProviderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProviderMode::Fundamental => "fundamental",
            ProviderMode::Full => "full",
        })
    }
}

/// The shipped provider: a fallback mode plus an optional table overlay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provider {
    fallback: ProviderMode,
    overlay: BTreeMap<Ordinal, ClosedSet>,
    universe: Ordinal,
}

impl Provider {
    /// Default universe bound ω^ω.
    pub fn default_universe() -> Ordinal {
        Ordinal::omega_pow(Ordinal::omega())
    }

    pub fn new(fallback: ProviderMode) -> Self {
        Provider {
            fallback,
            overlay: BTreeMap::new(),
            universe: Self::default_universe(),
        }
    }

    pub fn fundamental() -> Self {
        Self::new(ProviderMode::Fundamental)
    }

    pub fn full() -> Self {
        Self::new(ProviderMode::Full)
    }

    pub fn with_universe(mut self, universe: Ordinal) -> Self {
        self.universe = universe;
        self
    }

    /// Overrides `C_β` at a limit `β`; the set's bound must be `β`.
    pub fn with_entry(mut self, beta: Ordinal, set: ClosedSet) -> Result<Self> {
        if !beta.is_limit() {
            return Err(Error::InvalidSet(format!(
                "table entries are only allowed at limits, got {beta}"
            )));
        }
        if set.bound() != &beta || set.sup() != beta {
            return Err(Error::InvalidSet(format!(
                "entry for {beta} must be cofinal in {beta}, got {set}"
            )));
        }
        self.overlay.insert(beta, set);
        Ok(self)
    }

    pub fn mode(&self) -> ProviderMode {
        self.fallback
    }

    pub fn overlay(&self) -> &BTreeMap<Ordinal, ClosedSet> {
        &self.overlay
    }

    /// True when every `C_β ∩ γ` is finite, so ρ can enumerate it.
    pub fn is_enumerable(&self) -> bool {
        self.fallback == ProviderMode::Fundamental && self.overlay.is_empty()
    }
}

impl CSequence for Provider {
    fn cseq(&self, beta: &Ordinal) -> ClosedSet {
        match beta.classify() {
            Kind::Zero => ClosedSet::empty(),
            Kind::Successor => ClosedSet::finite([beta.pred().expect("successor")]),
            Kind::Limit => {
                if let Some(set) = self.overlay.get(beta) {
                    return set.clone();
                }
                match self.fallback {
                    ProviderMode::Fundamental => {
                        ClosedSet::fundamental(beta).expect("limit ordinal")
                    }
                    ProviderMode::Full => ClosedSet::full(beta),
                }
            }
        }
    }

    fn name(&self) -> String {
        if self.overlay.is_empty() {
            self.fallback.to_string()
        } else {
            format!("table({} entries over {})", self.overlay.len(), self.fallback)
        }
    }

    fn universe(&self) -> &Ordinal {
        &self.universe
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_set::Block;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn successor_and_zero_rules() {
        for p in [Provider::fundamental(), Provider::full()] {
            assert!(p.cseq(&Ordinal::zero()).is_empty());
            assert_eq!(p.cseq(&Ordinal::nat(5)), ClosedSet::from_naturals([4]));
            assert_eq!(p.cseq(&o("w + 1")), ClosedSet::finite([o("w")]));
        }
    }

    #[test]
    fn fundamental_mode_gives_ladders() {
        let c = Provider::fundamental().cseq(&o("w*2"));
        assert!(c.contains(&o("w + 1")));
        assert!(!c.contains(&o("w")));
        assert_eq!(c.min_above(&o("w + 5")), Some(o("w + 5")));
        assert_eq!(c.min_above(&Ordinal::zero()), Some(o("w + 1")));
    }

    #[test]
    fn overlay_entries_are_returned_verbatim() {
        let entry = ClosedSet::table(
            &o("w*3"),
            [Block::ladder(o("w*2")), Block::ladder(o("w*3"))],
        )
        .unwrap();
        let p = Provider::fundamental()
            .with_entry(o("w*3"), entry.clone())
            .unwrap();
        assert_eq!(p.cseq(&o("w*3")), entry);
        assert!(entry.contains(&o("w*2")));
        assert!(!p.is_enumerable());
    }

    #[test]
    fn overlay_rejects_successors_and_foreign_bounds() {
        let p = Provider::fundamental();
        assert!(p.clone().with_entry(o("w + 1"), ClosedSet::finite([o("w")])).is_err());
        let wrong = ClosedSet::fundamental(&o("w*2")).unwrap();
        assert!(p.with_entry(o("w*3"), wrong).is_err());
    }

    #[test]
    fn universe_check() {
        let p = Provider::fundamental();
        assert!(p.check_universe(&o("w^5*3")).is_ok());
        assert!(p.check_universe(&o("w^w")).is_err());
    }
}
