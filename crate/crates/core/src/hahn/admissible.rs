//! Admissible pairs and their limits.
//!
//! An admissible pair is a strictly increasing sequence `s_1 < s_2 <
//! ...` together with finite series `alpha_1, alpha_2, ...` such that
//! `supp(alpha_i) in [0, s_i)` and `supp(alpha_(i+1) - alpha_i) in
//! [s_i, s_(i+1))`. Its limit is the series whose prefix below every
//! `s_i` agrees with `alpha_i`.

use super::series::{Bound, HahnSeries};
use super::stream::StreamRule;
use super::HahnError;
use crate::field::CycloField;
use crate::rat::Rat;
use num_traits::Zero;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct AdmissiblePair {
    field: Arc<CycloField>,
    entries: Vec<(Rat, HahnSeries)>,
    /// Programmatic continuation: the checkpoints `(s_i, alpha_i)` of
    /// this rule extend the finite entries.
    extension: Option<StreamRule>,
}

impl AdmissiblePair {
    /// Validates the defining support conditions.
    pub fn new(
        field: &Arc<CycloField>,
        entries: Vec<(Rat, HahnSeries)>,
    ) -> Result<Self, HahnError> {
        if entries.is_empty() {
            return Err(HahnError::InvalidPair("no entries".into()));
        }
        for (i, (s, alpha)) in entries.iter().enumerate() {
            if s <= &Rat::zero() {
                return Err(HahnError::InvalidPair(format!(
                    "cutoff exponent s_{} must be positive",
                    i + 1
                )));
            }
            if !alpha.is_exact() {
                return Err(HahnError::InvalidPair(format!(
                    "alpha_{} is not an exact finite series",
                    i + 1
                )));
            }
            for e in alpha.support() {
                if e < Rat::zero() || &e >= s {
                    return Err(HahnError::InvalidPair(format!(
                        "supp(alpha_{}) not contained in [0, s_{})",
                        i + 1,
                        i + 1
                    )));
                }
            }
            if i > 0 {
                let (sp, prev) = &entries[i - 1];
                if sp >= s {
                    return Err(HahnError::InvalidPair(
                        "cutoff exponents not strictly increasing".into(),
                    ));
                }
                let diff = alpha.sub(prev);
                for e in diff.support() {
                    if &e < sp || &e >= s {
                        return Err(HahnError::InvalidPair(format!(
                            "supp(alpha_{} - alpha_{}) not contained in [s_{}, s_{})",
                            i + 1,
                            i,
                            i,
                            i + 1
                        )));
                    }
                }
            }
        }
        Ok(AdmissiblePair {
            field: field.clone(),
            entries,
            extension: None,
        })
    }

    /// The canonical admissible pair of a stream rule: `s_i` are the
    /// knowledge bounds after each pull and `alpha_i` the partial
    /// sums. `checkpoints` controls how many finite entries are
    /// materialized for inspection.
    pub fn from_rule(
        field: &Arc<CycloField>,
        rule: StreamRule,
        checkpoints: usize,
    ) -> Result<Self, HahnError> {
        let mut series = HahnSeries::from_rule(field, rule.clone());
        let mut entries = Vec::with_capacity(checkpoints);
        // s_1 is the rule's start bound when positive, with alpha_1 = 0.
        let start = rule.start_bound();
        if start > Rat::zero() {
            entries.push((start, HahnSeries::zero(field)));
        }
        while entries.len() < checkpoints {
            let target = match series.known_below() {
                Bound::Finite(b) => b + Rat::new(1.into(), 1.into()),
                Bound::Infinite => break,
            };
            series.ensure_known_below(&target)?;
            match series.known_below() {
                Bound::Finite(s) => {
                    let prefix =
                        HahnSeries::from_terms(field, series.terms().to_vec());
                    entries.push((s.clone(), prefix));
                }
                Bound::Infinite => break,
            }
        }
        if entries.is_empty() {
            return Err(HahnError::InvalidPair(
                "rule produced no admissible checkpoints".into(),
            ));
        }
        let mut pair = Self::new(field, entries)?;
        pair.extension = Some(rule);
        Ok(pair)
    }

    pub fn entries(&self) -> &[(Rat, HahnSeries)] {
        &self.entries
    }

    /// The limit: a series agreeing with `alpha_i` below each `s_i`.
    ///
    /// For a finite pair this is the last prefix, known below the last
    /// cutoff; for a rule-backed pair the limit keeps the rule as its
    /// lazy tail, so the prefix union can be pulled arbitrarily far.
    pub fn limit(&self) -> HahnSeries {
        match &self.extension {
            Some(rule) => HahnSeries::from_rule(&self.field, rule.clone()),
            None => {
                let (s_last, alpha_last) = self.entries.last().expect("nonempty");
                alpha_last
                    .clone()
                    .with_precision(Bound::Finite(s_last.clone()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElem;
    use crate::rat::{rat, rat_int};

    fn q() -> Arc<CycloField> {
        CycloField::rationals()
    }

    fn fin(field: &Arc<CycloField>, terms: &[(Rat, i64)]) -> HahnSeries {
        HahnSeries::from_terms(
            field,
            terms
                .iter()
                .map(|(e, c)| (e.clone(), FieldElem::from_int(field, *c)))
                .collect(),
        )
    }

    #[test]
    fn integer_rule_limit_is_prefix_union() {
        let f = q();
        let rule = StreamRule::Integers {
            coeff: FieldElem::one(&f),
        };
        let pair = AdmissiblePair::from_rule(&f, rule, 4).unwrap();
        // s_i checkpoints: 1, 2, 3, 4 with partial sums 0, t, t+t^2, ...
        assert_eq!(pair.entries()[0].0, rat_int(1));
        assert!(pair.entries()[0].1.is_exact_zero());
        assert_eq!(pair.entries()[2].1, fin(&f, &[(rat_int(1), 1), (rat_int(2), 1)]));
        let mut limit = pair.limit();
        limit.ensure_known_below(&rat_int(5)).unwrap();
        assert_eq!(
            limit.support(),
            vec![rat_int(1), rat_int(2), rat_int(3), rat_int(4)]
        );
        // prefix property: supp(limit) below s_i equals supp(alpha_i)
        for (s, alpha) in pair.entries() {
            let prefix: Vec<Rat> = limit
                .support()
                .into_iter()
                .filter(|e| e < s)
                .collect();
            assert_eq!(prefix, alpha.support());
        }
    }

    #[test]
    fn constant_extension_gives_exact_zero() {
        let f = q();
        let rule = StreamRule::Finite { terms: vec![] };
        let entries = vec![
            (rat_int(1), HahnSeries::zero(&f)),
            (rat_int(2), HahnSeries::zero(&f)),
        ];
        let mut pair = AdmissiblePair::new(&f, entries).unwrap();
        pair.extension = Some(rule);
        let mut limit = pair.limit();
        limit.ensure_known_below(&rat_int(100)).unwrap();
        assert!(limit.is_exact_zero());
    }

    #[test]
    fn half_integer_pair() {
        let f = q();
        // S = (1/2, 3/2, 5/2), Lambda = (0, t^(1/2), t^(1/2)+t^(3/2))
        let entries = vec![
            (rat(1, 2), HahnSeries::zero(&f)),
            (rat(3, 2), fin(&f, &[(rat(1, 2), 1)])),
            (rat(5, 2), fin(&f, &[(rat(1, 2), 1), (rat(3, 2), 1)])),
        ];
        let pair = AdmissiblePair::new(&f, entries).unwrap();
        let limit = pair.limit();
        assert_eq!(limit.support(), vec![rat(1, 2), rat(3, 2)]);
        assert_eq!(limit.known_below(), &Bound::Finite(rat(5, 2)));
    }

    #[test]
    fn invalid_pairs_rejected() {
        let f = q();
        // supp(alpha_1) not inside [0, s_1)
        let bad = vec![(rat(1, 2), fin(&f, &[(rat_int(1), 1)]))];
        assert!(AdmissiblePair::new(&f, bad).is_err());
        // difference escapes the window: alpha_2 - alpha_1 = t^3 with s_2 = 2
        let bad2 = vec![
            (rat_int(1), HahnSeries::zero(&f)),
            (rat_int(2), fin(&f, &[(rat_int(3), 1)])),
        ];
        assert!(AdmissiblePair::new(&f, bad2).is_err());
        // not strictly increasing
        let bad3 = vec![
            (rat_int(1), HahnSeries::zero(&f)),
            (rat_int(1), HahnSeries::zero(&f)),
        ];
        assert!(AdmissiblePair::new(&f, bad3).is_err());
    }
}
