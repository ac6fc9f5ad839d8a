//! Brute-force enumeration of `F_P(F)`.
//!
//! Ground truth for the dynamic-programming solver: every certain-respecting
//! subframework is materialised, weighted by its independent-model probability,
//! and checked with the semantics predicates directly.

use fixedbitset::FixedBitSet;

use crate::af::{ArgSet, Subframework, SubView};
use crate::error::{Error, Result};
use crate::paf::Paf;
use crate::scalar::Probability;
use crate::semantics::{credulously_accepted, is_extension_unchecked, Semantics};

/// Default cap on the number of uncertain arguments plus uncertain attacks.
pub const DEFAULT_CAPACITY: usize = 30;

/// Odometer over `F_P(F)`.
///
/// The outer counter runs over uncertain arguments (canonical order, bit i =
/// i-th uncertain argument). For each argument assignment the inner counter
/// runs over the uncertain attacks whose endpoints are both present, in attack
/// order. Certain elements are fixed.
pub struct EnumerationCursor<'a> {
    paf: &'a Paf,
    uncertain_args: Vec<usize>,
    uncertain_atts: Vec<usize>,
    arg_mask: u64,
    att_mask: u64,
    base: Subframework,
    live_atts: Vec<usize>,
    done: bool,
}

impl<'a> EnumerationCursor<'a> {
    pub fn new(paf: &'a Paf, capacity: usize) -> Result<Self> {
        let uncertain = paf.uncertain_elements();
        if uncertain > capacity || uncertain > 63 {
            return Err(Error::Capacity(format!(
                "{uncertain} uncertain elements exceed the enumeration cap of {}",
                capacity.min(63)
            )));
        }
        let af = paf.af();
        let uncertain_args = (0..af.len()).filter(|&a| !paf.arg_certain(a)).collect();
        let uncertain_atts = (0..af.attacks().len()).filter(|&i| !paf.att_certain(i)).collect();
        let mut cursor = EnumerationCursor {
            paf,
            uncertain_args,
            uncertain_atts,
            arg_mask: 0,
            att_mask: 0,
            base: Subframework { args: af.empty_set(), atts: FixedBitSet::with_capacity(af.attacks().len()) },
            live_atts: Vec::new(),
            done: false,
        };
        cursor.load_args();
        Ok(cursor)
    }

    pub fn uncertain_args(&self) -> &[usize] {
        &self.uncertain_args
    }

    /// Uncertain attacks decidable under the current argument assignment.
    pub fn live_atts(&self) -> &[usize] {
        &self.live_atts
    }

    fn load_args(&mut self) {
        let af = self.paf.af();
        let mut args = af.full_set();
        for (bit, &a) in self.uncertain_args.iter().enumerate() {
            if self.arg_mask >> bit & 1 == 0 {
                args.set(a, false);
            }
        }
        let mut atts = FixedBitSet::with_capacity(af.attacks().len());
        self.live_atts.clear();
        for (i, att) in af.attacks().iter().enumerate() {
            if args.contains(att.source) && args.contains(att.target) && self.paf.att_certain(i) {
                atts.insert(i);
            }
        }
        for &i in &self.uncertain_atts {
            let att = af.attack(i);
            if args.contains(att.source) && args.contains(att.target) {
                self.live_atts.push(i);
            }
        }
        self.base = Subframework { args, atts };
        self.att_mask = 0;
    }

    fn current(&self) -> Subframework {
        let mut f = self.base.clone();
        for (bit, &i) in self.live_atts.iter().enumerate() {
            if self.att_mask >> bit & 1 == 1 {
                f.atts.insert(i);
            }
        }
        f
    }

    fn advance(&mut self) {
        self.att_mask += 1;
        if self.att_mask >> self.live_atts.len() == 0 {
            return;
        }
        self.arg_mask += 1;
        if self.arg_mask >> self.uncertain_args.len() != 0 {
            self.done = true;
            return;
        }
        self.load_args();
    }
}

impl Iterator for EnumerationCursor<'_> {
    type Item = Subframework;

    fn next(&mut self) -> Option<Subframework> {
        if self.done {
            return None;
        }
        let f = self.current();
        self.advance();
        Some(f)
    }
}

/// Every member of `F_P(paf)` with its probability, in cursor order.
pub fn enumerate_subframeworks<P: Probability>(
    paf: &Paf,
    capacity: usize,
) -> Result<impl Iterator<Item = (Subframework, P)> + '_> {
    Ok(EnumerationCursor::new(paf, capacity)?.map(move |f| {
        let p = paf.subframework_probability_unchecked(&f);
        (f, p)
    }))
}

/// Oracle for `P-Ext` and `P-Acc` with a configurable enumeration cap.
#[derive(Debug, Clone, Copy)]
pub struct Oracle<'a> {
    paf: &'a Paf,
    capacity: usize,
}

impl<'a> Oracle<'a> {
    pub fn new(paf: &'a Paf) -> Self {
        Oracle { paf, capacity: DEFAULT_CAPACITY }
    }

    pub fn with_capacity(mut self, capacity: usize) -> Self {
        self.capacity = capacity;
        self
    }

    fn sum_where<P, F>(&self, mut accept: F) -> Result<(P, u64)>
    where
        P: Probability,
        F: FnMut(&Subframework) -> Result<bool>,
    {
        let mut total = P::zero();
        let mut count = 0u64;
        for (f, p) in enumerate_subframeworks::<P>(self.paf, self.capacity)? {
            if accept(&f)? {
                total = total + p;
                count += 1;
            }
        }
        Ok((total, count))
    }

    fn ext_pred(&self, sigma: Semantics, s: &ArgSet) -> Result<impl FnMut(&Subframework) -> Result<bool> + '_> {
        self.paf.af().check_set(s)?;
        let s = s.clone();
        let af = self.paf.af();
        Ok(move |f: &Subframework| {
            Ok(s.is_subset(&f.args) && is_extension_unchecked(&SubView::new(af, f), sigma, &s))
        })
    }

    fn acc_pred(&self, sigma: Semantics, a: usize) -> Result<impl FnMut(&Subframework) -> Result<bool> + '_> {
        let af = self.paf.af();
        if a >= af.len() {
            return Err(Error::UnknownArgument(format!("#{a}")));
        }
        Ok(move |f: &Subframework| {
            if !f.args.contains(a) {
                return Ok(false);
            }
            credulously_accepted(&SubView::new(af, f), sigma, a)
        })
    }

    /// Sum of `P(f)` over subframeworks in which `s` is a `sigma`-extension.
    pub fn p_ext<P: Probability>(&self, sigma: Semantics, s: &ArgSet) -> Result<P> {
        let pred = self.ext_pred(sigma, s)?;
        Ok(self.sum_where(pred)?.0)
    }

    /// Sum of `P(f)` over subframeworks in which some `sigma`-extension contains `a`.
    pub fn p_acc<P: Probability>(&self, sigma: Semantics, a: usize) -> Result<P> {
        let pred = self.acc_pred(sigma, a)?;
        Ok(self.sum_where(pred)?.0)
    }

    /// Number of subframeworks in which `s` is a `sigma`-extension.
    pub fn count_ext(&self, sigma: Semantics, s: &ArgSet) -> Result<u64> {
        let pred = self.ext_pred(sigma, s)?;
        Ok(self.sum_where::<f64, _>(pred)?.1)
    }

    /// Number of subframeworks in which `a` is credulously accepted under `sigma`.
    pub fn count_acc(&self, sigma: Semantics, a: usize) -> Result<u64> {
        let pred = self.acc_pred(sigma, a)?;
        Ok(self.sum_where::<f64, _>(pred)?.1)
    }

    /// `|F_P(paf)|`.
    pub fn count_subframeworks(&self) -> Result<u64> {
        Ok(EnumerationCursor::new(self.paf, self.capacity)?.count() as u64)
    }
}

pub fn p_ext_oracle<P: Probability>(paf: &Paf, sigma: Semantics, s: &ArgSet) -> Result<P> {
    Oracle::new(paf).p_ext(sigma, s)
}

pub fn p_acc_oracle<P: Probability>(paf: &Paf, sigma: Semantics, a: usize) -> Result<P> {
    Oracle::new(paf).p_acc(sigma, a)
}

pub fn count_ext(paf: &Paf, sigma: Semantics, s: &ArgSet) -> Result<u64> {
    Oracle::new(paf).count_ext(sigma, s)
}

pub fn count_acc(paf: &Paf, sigma: Semantics, a: usize) -> Result<u64> {
    Oracle::new(paf).count_acc(sigma, a)
}
