//! Counting formulas, brute-force enumerations that check them, and the
//! cyclotomic-coset tally of trace-one primitive elements.

mod brute;
mod cosets;
mod counts;

pub use brute::{
    count_matrices_with_charpoly, enumerate_family, enumerate_gl, enumerate_special_primitives,
    enumerate_tsrp_bruteforce, SpecialForm,
};
pub use cosets::{
    conjugate_class_summary, count_trace_one_classes, count_trace_one_primitive_elements, cyclotomic_partition,
    is_coset_leader, ConjugateClassSummary, CosetPartition, TraceOneTally,
};
pub use counts::{closed_form_count, gl_order, tsrp_count_theorem, tsrp_upper_bound, CountKind};
