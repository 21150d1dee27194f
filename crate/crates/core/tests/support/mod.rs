#![allow(dead_code)]

pub mod classifier_check;
pub mod dedup_check;
pub mod filter_table;
pub mod fixtures;
pub mod kn_check;
pub mod kn_oracle;
pub mod models;
