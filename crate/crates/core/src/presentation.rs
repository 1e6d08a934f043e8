//! Finite presentations and the density-model sampler.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{sample_plain_word, sample_reduced_word, Word, MAX_GENERATORS};

/// `⟨a_1, …, a_m | R⟩` with every relator cyclically reduced and nonempty.
/// Relators form a multiset: duplicates are kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: usize,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        if generators == 0 || generators > MAX_GENERATORS {
            return Err(Error::InvalidPresentation(format!("generator count {generators} out of range")));
        }
        for (i, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::InvalidPresentation(format!("relator {i} is empty")));
            }
            if !r.is_cyclically_reduced() {
                return Err(Error::InvalidPresentation(format!("relator {i} ({r}) is not cyclically reduced")));
            }
            if r.max_generator() > generators {
                return Err(Error::InvalidPresentation(format!("relator {i} ({r}) uses a generator beyond m = {generators}")));
            }
        }
        Ok(Presentation { generators, relators })
    }

    /// Free group of rank `m` (no relators).
    pub fn free(generators: usize) -> Result<Self> {
        Presentation::new(generators, Vec::new())
    }

    /// Cyclically reduces every word and drops those that vanish.
    pub fn normalized(generators: usize, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let relators = words.into_iter().map(|w| w.cyclic_reduce().0).filter(|w| !w.is_empty()).collect();
        Presentation::new(generators, relators)
    }

    #[inline]
    pub fn generators(&self) -> usize {
        self.generators
    }

    #[inline]
    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// λ, the maximal relator length (0 without relators).
    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn min_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).min().unwrap_or(0)
    }

    /// Closure of the relators under rotation and inversion, deduplicated.
    pub fn symmetrize(&self) -> BTreeSet<Word> {
        self.symmetrized_entries().into_iter().map(|e| e.word).collect()
    }

    /// Every rotation of every `r^{±1}`, tagged with its origin. Entries with
    /// the same word and the same relator index are merged; equal words coming
    /// from different relator indices are kept apart.
    pub fn symmetrized_entries(&self) -> Vec<SymmetrizedEntry> {
        let mut out = Vec::new();
        for (i, r) in self.relators.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for inverted in [false, true] {
                let base = if inverted { r.inverse() } else { r.clone() };
                for offset in 0..base.len() {
                    let word = base.rotate(offset);
                    if seen.insert(word.clone()) {
                        out.push(SymmetrizedEntry { word, occurrence: Occurrence { relator: i, offset, inverted } });
                    }
                }
            }
        }
        out
    }

    /// Writes the text format: `m=<int>` then one relator per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("m={}\n", self.generators);
        for r in &self.relators {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for i in 0..self.generators {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", (b'a' + i as u8) as char)?;
        }
        write!(f, " | ")?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ">")
    }
}

impl FromStr for Presentation {
    type Err = Error;

    /// Parses the text format. `#` starts a comment; blank lines are skipped.
    /// Relators are cyclically reduced on input and freely trivial ones are
    /// rejected.
    fn from_str(text: &str) -> Result<Self> {
        let mut generators: Option<usize> = None;
        let mut relators = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = no + 1;
            match generators {
                None => {
                    let value = line
                        .strip_prefix("m=")
                        .or_else(|| line.strip_prefix("m ="))
                        .ok_or_else(|| Error::Parse { line: lineno, message: "expected `m=<int>`".into() })?;
                    let m = value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?;
                    generators = Some(m);
                }
                Some(m) => {
                    let w: Word = line.parse().map_err(|e: Error| Error::Parse { line: lineno, message: e.to_string() })?;
                    if w.max_generator() > m {
                        return Err(Error::Parse { line: lineno, message: format!("relator {w} uses a generator beyond m = {m}") });
                    }
                    let core = w.cyclic_reduce().0;
                    if core.is_empty() {
                        return Err(Error::Parse { line: lineno, message: format!("relator {w} is freely trivial") });
                    }
                    relators.push(core);
                }
            }
        }
        let m = generators.ok_or(Error::Parse { line: 0, message: "missing `m=<int>` header".into() })?;
        Presentation::new(m, relators)
    }
}

/// Where a symmetrized word comes from: `rotate(r_relator^{±1}, offset)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    pub relator: usize,
    pub offset: usize,
    pub inverted: bool,
}

impl Occurrence {
    pub fn word(&self, p: &Presentation) -> Word {
        let r = &p.relators()[self.relator];
        if self.inverted {
            r.inverse().rotate(self.offset)
        } else {
            r.rotate(self.offset)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizedEntry {
    pub word: Word,
    pub occurrence: Occurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordKind {
    Plain,
    Reduced,
}

impl WordKind {
    /// `2m` for plain words, `2m - 1` for reduced ones.
    pub fn base(self, m: usize) -> usize {
        match self {
            WordKind::Plain => 2 * m,
            WordKind::Reduced => 2 * m - 1,
        }
    }
}

impl fmt::Display for WordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WordKind::Plain => "plain",
            WordKind::Reduced => "reduced",
        })
    }
}

impl FromStr for WordKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(WordKind::Plain),
            "reduced" => Ok(WordKind::Reduced),
            _ => Err(Error::InvalidArgument(format!("unknown word kind {s:?}"))),
        }
    }
}

/// Parameters of the density model at one `(m, d, ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityConfig {
    pub generators: usize,
    pub density: f64,
    pub length: usize,
    pub kind: WordKind,
}

impl DensityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.generators < 2 || self.generators > MAX_GENERATORS {
            return Err(Error::InvalidArgument(format!("density model needs 2 <= m <= 26, got {}", self.generators)));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::Domain { value: self.density, domain: "[0, 1]".into() });
        }
        if self.length == 0 {
            return Err(Error::InvalidArgument("relator length must be at least 1".into()));
        }
        Ok(())
    }

    /// `round(base^{dℓ})`, at least 1.
    pub fn relator_count(&self) -> u128 {
        let base = self.kind.base(self.generators) as f64;
        let n = base.powf(self.density * self.length as f64).round();
        if n >= u128::MAX as f64 {
            u128::MAX
        } else {
            (n as u128).max(1)
        }
    }
}

/// A sampled presentation together with what the sampler saw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySample {
    pub config: DensityConfig,
    pub presentation: Presentation,
    /// The words as drawn, before cyclic reduction.
    pub raw_relators: Vec<Word>,
    /// Drawn words that freely reduce to the empty word (not in the presentation).
    pub dropped_trivial: usize,
    /// Drawn words whose cyclic reduction is shorter than ℓ.
    pub shortened: usize,
}

/// Draws `N` relators i.i.d. uniform among plain or reduced words of length ℓ.
pub fn sample_density_presentation<R: Rng + ?Sized>(cfg: &DensityConfig, budget: usize, rng: &mut R) -> Result<DensitySample> {
    cfg.validate()?;
    let n = cfg.relator_count();
    if n > budget as u128 {
        return Err(Error::RelatorBudget { requested: n, budget });
    }
    let raw_relators: Vec<Word> = (0..n as usize)
        .map(|_| match cfg.kind {
            WordKind::Plain => sample_plain_word(cfg.generators, cfg.length, rng),
            WordKind::Reduced => sample_reduced_word(cfg.generators, cfg.length, rng),
        })
        .collect();
    let cores: Vec<Word> = raw_relators.iter().map(|w| w.cyclic_reduce().0).collect();
    let dropped_trivial = cores.iter().filter(|c| c.is_empty()).count();
    let shortened = cores.iter().filter(|c| !c.is_empty() && c.len() < cfg.length).count();
    let presentation = Presentation::new(cfg.generators, cores.into_iter().filter(|c| !c.is_empty()).collect())?;
    Ok(DensitySample { config: *cfg, presentation, raw_relators, dropped_trivial, shortened })
}

/// JSON sidecar written next to a sampled presentation file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSidecar {
    pub seed: u64,
    pub m: usize,
    pub d: f64,
    pub ell: usize,
    pub kind: WordKind,
    pub relators_drawn: usize,
    pub dropped_trivial: usize,
    pub shortened: usize,
}

impl SampleSidecar {
    pub fn new(seed: u64, sample: &DensitySample) -> Self {
        SampleSidecar {
            seed,
            m: sample.config.generators,
            d: sample.config.density,
            ell: sample.config.length,
            kind: sample.config.kind,
            relators_drawn: sample.raw_relators.len(),
            dropped_trivial: sample.dropped_trivial,
            shortened: sample.shortened,
        }
    }
}
