//! Numeric side of the sign argument: `f`, `Q`, `F`, `G`, the choice of ε and
//! b₀, and the final verdict on a candidate zero.

pub mod forms;

pub use forms::{
    b1_b2, cross_part, f_direct, f_eval, f_split, g_values, norm_part, norm_part_printed,
    q_eval, q_eval_auto, q_merged, remainder, ExpScaled, Summed,
};
pub mod search;
pub mod verdict;
