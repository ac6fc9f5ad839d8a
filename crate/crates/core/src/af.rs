//! Abstract argumentation frameworks and subframework views.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A set of arguments, indexed by canonical argument position.
pub type ArgSet = FixedBitSet;

/// Argument name: a non-empty token without whitespace or commas, not starting with `#`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgId(String);

impl ArgId {
    pub fn new(name: &str) -> Result<Self> {
        let ok = !name.is_empty()
            && !name.starts_with('#')
            && !name.chars().any(|c| c.is_whitespace() || c == ',');
        if ok {
            Ok(ArgId(name.to_string()))
        } else {
            Err(Error::InvalidName(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An attack `source -> target`, by argument index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attack {
    pub source: usize,
    pub target: usize,
}

/// An argumentation framework `(A, R)`.
///
/// Arguments are stored in canonical (lexicographic) order and addressed by
/// index; attacks are sorted by `(source, target)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Af {
    names: Vec<ArgId>,
    index: HashMap<ArgId, usize>,
    attacks: Vec<Attack>,
    attack_index: HashMap<(usize, usize), usize>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

impl Af {
    pub fn new<'a, A, R>(arguments: A, attacks: R) -> Result<Self>
    where
        A: IntoIterator<Item = &'a str>,
        R: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut names = arguments
            .into_iter()
            .map(ArgId::new)
            .collect::<Result<Vec<_>>>()?;
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate(format!("argument `{}`", w[0])));
        }
        let index: HashMap<ArgId, usize> =
            names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let lookup = |n: &str| -> Result<usize> {
            ArgId::new(n)
                .ok()
                .and_then(|id| index.get(&id).copied())
                .ok_or_else(|| Error::UnknownArgument(n.to_string()))
        };
        let mut atts = Vec::new();
        for (s, t) in attacks {
            atts.push(Attack { source: lookup(s)?, target: lookup(t)? });
        }
        atts.sort();
        if let Some(w) = atts.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate(format!(
                "attack ({}, {})",
                names[w[0].source], names[w[0].target]
            )));
        }
        Ok(Self::from_sorted(names, index, atts))
    }

    fn from_sorted(names: Vec<ArgId>, index: HashMap<ArgId, usize>, attacks: Vec<Attack>) -> Self {
        let n = names.len();
        let mut incoming = vec![Vec::new(); n];
        let mut outgoing = vec![Vec::new(); n];
        let mut attack_index = HashMap::with_capacity(attacks.len());
        for (i, a) in attacks.iter().enumerate() {
            incoming[a.target].push(i);
            outgoing[a.source].push(i);
            attack_index.insert((a.source, a.target), i);
        }
        Af { names, index, attacks, attack_index, incoming, outgoing }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[ArgId] {
        &self.names
    }

    pub fn name(&self, arg: usize) -> &str {
        self.names[arg].as_str()
    }

    pub fn arg(&self, name: &str) -> Result<usize> {
        ArgId::new(name)
            .ok()
            .and_then(|id| self.index.get(&id).copied())
            .ok_or_else(|| Error::UnknownArgument(name.to_string()))
    }

    pub fn attacks(&self) -> &[Attack] {
        &self.attacks
    }

    pub fn attack(&self, idx: usize) -> Attack {
        self.attacks[idx]
    }

    pub fn attack_id(&self, source: usize, target: usize) -> Option<usize> {
        self.attack_index.get(&(source, target)).copied()
    }

    /// Indices of attacks targeting `arg`.
    pub fn incoming(&self, arg: usize) -> &[usize] {
        &self.incoming[arg]
    }

    /// Indices of attacks originating at `arg`.
    pub fn outgoing(&self, arg: usize) -> &[usize] {
        &self.outgoing[arg]
    }

    pub fn empty_set(&self) -> ArgSet {
        ArgSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> ArgSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// Resolves argument names into a set.
    pub fn arg_set<'a, I: IntoIterator<Item = &'a str>>(&self, names: I) -> Result<ArgSet> {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.arg(n)?);
        }
        Ok(s)
    }

    /// Names of the members of `set`, in canonical order.
    pub fn set_names(&self, set: &ArgSet) -> Vec<&str> {
        set.ones().map(|i| self.name(i)).collect()
    }

    pub fn format_set(&self, set: &ArgSet) -> String {
        format!("{{{}}}", self.set_names(set).join(","))
    }

    /// Checks that `set` is a subset of this framework's argument indices.
    pub fn check_set(&self, set: &ArgSet) -> Result<()> {
        match set.ones().find(|&i| i >= self.len()) {
            Some(i) => Err(Error::UnknownArgument(format!("#{i}"))),
            None => Ok(()),
        }
    }

    /// The framework with the arguments in `removed` (and their incident attacks) deleted.
    ///
    /// Returns the new framework and, for every old index, its new index if kept.
    pub fn without(&self, removed: &ArgSet) -> (Af, Vec<Option<usize>>) {
        let mut map = vec![None; self.len()];
        let mut names = Vec::new();
        for (i, n) in self.names.iter().enumerate() {
            if !removed.contains(i) {
                map[i] = Some(names.len());
                names.push(n.clone());
            }
        }
        let index = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let attacks = self
            .attacks
            .iter()
            .filter_map(|a| {
                Some(Attack { source: map[a.source]?, target: map[a.target]? })
            })
            .collect();
        (Af::from_sorted(names, index, attacks), map)
    }
}

/// A subframework `(A', R')`: present arguments and present attacks (by attack index).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subframework {
    pub args: ArgSet,
    pub atts: FixedBitSet,
}

impl Subframework {
    /// The framework itself, everything present.
    pub fn full(af: &Af) -> Self {
        let mut atts = FixedBitSet::with_capacity(af.attacks().len());
        atts.insert_range(..);
        Subframework { args: af.full_set(), atts }
    }

    /// Builds a subframework from names. Attack endpoints must be present.
    pub fn from_names<'a>(
        af: &Af,
        args: impl IntoIterator<Item = &'a str>,
        atts: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let args = af.arg_set(args)?;
        let mut set = FixedBitSet::with_capacity(af.attacks().len());
        for (s, t) in atts {
            let (s, t) = (af.arg(s)?, af.arg(t)?);
            let idx = af
                .attack_id(s, t)
                .ok_or_else(|| Error::UnknownArgument(format!("attack ({}, {})", af.name(s), af.name(t))))?;
            set.insert(idx);
        }
        let sub = Subframework { args, atts: set };
        sub.check(af)?;
        Ok(sub)
    }

    /// Checks `R' ⊆ R ∩ (A' × A')`.
    pub fn check(&self, af: &Af) -> Result<()> {
        af.check_set(&self.args)?;
        for idx in self.atts.ones() {
            if idx >= af.attacks().len() {
                return Err(Error::NotCertainRespecting(format!("unknown attack #{idx}")));
            }
            let a = af.attack(idx);
            if !self.args.contains(a.source) || !self.args.contains(a.target) {
                return Err(Error::NotCertainRespecting(format!(
                    "attack ({}, {}) has an absent endpoint",
                    af.name(a.source),
                    af.name(a.target)
                )));
            }
        }
        Ok(())
    }
}

/// Read access to a (sub)framework for the semantics predicates.
pub trait AttackGraph {
    fn af(&self) -> &Af;
    fn has_arg(&self, arg: usize) -> bool;
    fn has_attack(&self, idx: usize) -> bool;

    fn present_args(&self) -> ArgSet {
        let af = self.af();
        let mut s = af.empty_set();
        for i in 0..af.len() {
            if self.has_arg(i) {
                s.insert(i);
            }
        }
        s
    }

    /// Sources of present attacks on `arg`.
    fn attackers(&self, arg: usize) -> impl Iterator<Item = usize> + '_ {
        let af = self.af();
        af.incoming(arg)
            .iter()
            .filter(move |&&i| self.has_attack(i))
            .map(move |&i| af.attack(i).source)
    }

    /// Targets of present attacks from `arg`.
    fn targets(&self, arg: usize) -> impl Iterator<Item = usize> + '_ {
        let af = self.af();
        af.outgoing(arg)
            .iter()
            .filter(move |&&i| self.has_attack(i))
            .map(move |&i| af.attack(i).target)
    }
}

impl AttackGraph for Af {
    fn af(&self) -> &Af {
        self
    }

    fn has_arg(&self, arg: usize) -> bool {
        arg < self.len()
    }

    fn has_attack(&self, idx: usize) -> bool {
        idx < self.attacks.len()
    }
}

/// A subframework viewed against its parent framework.
#[derive(Debug, Clone, Copy)]
pub struct SubView<'a> {
    pub af: &'a Af,
    pub sub: &'a Subframework,
}

impl<'a> SubView<'a> {
    pub fn new(af: &'a Af, sub: &'a Subframework) -> Self {
        SubView { af, sub }
    }
}

impl AttackGraph for SubView<'_> {
    fn af(&self) -> &Af {
        self.af
    }

    fn has_arg(&self, arg: usize) -> bool {
        self.sub.args.contains(arg)
    }

    fn has_attack(&self, idx: usize) -> bool {
        self.sub.atts.contains(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_lookup() {
        let af = Af::new(["c", "a", "b"], [("c", "a"), ("a", "b")]).unwrap();
        assert_eq!(af.set_names(&af.full_set()), ["a", "b", "c"]);
        assert_eq!(af.attacks()[0], Attack { source: 0, target: 1 });
        assert_eq!(af.attack_id(2, 0), Some(1));
        assert_eq!(af.attackers(0).collect::<Vec<_>>(), [2]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Af::new(["a", "a"], []), Err(Error::Duplicate(_))));
        assert!(matches!(Af::new(["a"], [("a", "b")]), Err(Error::UnknownArgument(_))));
        assert!(matches!(Af::new(["a"], [("a", "a"), ("a", "a")]), Err(Error::Duplicate(_))));
        assert!(matches!(Af::new(["#x"], []), Err(Error::InvalidName(_))));
        assert!(matches!(Af::new(["x,y"], []), Err(Error::InvalidName(_))));
        assert!(Af::new(["a"], [("a", "a")]).is_ok());
    }

    #[test]
    fn without_reindexes() {
        let af = Af::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let removed = af.arg_set(["b"]).unwrap();
        let (small, map) = af.without(&removed);
        assert_eq!(map, vec![Some(0), None, Some(1)]);
        assert_eq!(small.attacks(), &[Attack { source: 1, target: 0 }]);
        assert_eq!(small.name(1), "c");
    }

    #[test]
    fn subframework_rejects_dangling_attack() {
        let af = Af::new(["a", "b"], [("a", "b")]).unwrap();
        assert!(Subframework::from_names(&af, ["a"], [("a", "b")]).is_err());
        assert!(Subframework::from_names(&af, ["a", "b"], [("a", "b")]).is_ok());
    }
}
