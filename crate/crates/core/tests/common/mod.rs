#![allow(dead_code)]
pub mod corpus;
pub mod decider_oracle;
pub mod itrm_corpus;
pub mod itrm_ref;
pub mod toys;
