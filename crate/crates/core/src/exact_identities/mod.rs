//! Exact consequences of the translation formulae at negative integers:
//! values of `Li_{−1}`, recurrences for even Bernoulli numbers and tangent
//! numbers, tangent-number congruences, and an odd-zeta series generator.
//!
//! Everything here runs in big-rational arithmetic except the numeric check of
//! the zeta series.

mod recurrences;
mod tangent;
mod zseries;

pub use recurrences::{
    bernoulli_recurrence_a, bernoulli_recurrence_b, check_bernoulli_recurrences, check_k3_recurrences,
    check_negint_specializations, k3_recurrence_a, k3_recurrence_b, li_minus1_neg, negint_even, negint_odd,
    recurrence_scan, t_sum, RecurrenceKind, RecurrenceRow,
};
pub use tangent::{
    congruence_scan, tangent_sequence, tangent_via_recurrence, tangent_zigzag, CongruenceReport, CongruenceRow,
    TangentVariant,
};
pub use zseries::{zseries_check, zseries_representation, ZSeriesCheck, ZSeriesRep};
