#![allow(dead_code)]

use std::path::PathBuf;

use ctype_core::{CPlusSchedule, CTypeOperator, Dyadic, SparseVec};

pub fn schedule_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schedules").join(name)
}

pub fn schedule(name: &str) -> CPlusSchedule {
    CPlusSchedule::load(&schedule_path(name)).expect("bundled schedule parses")
}

/// S₀: Δ0 = 4, levels (2,1,2,16) and (4,2,4,64).
pub fn s0() -> CPlusSchedule {
    schedule("s0.toml")
}

/// S₀ with two more levels, (8,4,8,256) and (16,8,16,1024).
pub fn s0_k4() -> CPlusSchedule {
    schedule("s0_k4.toml")
}

pub fn s0_op() -> CTypeOperator {
    s0().build_operator(2).unwrap()
}

pub fn e(i: usize) -> SparseVec {
    SparseVec::unit(i)
}

pub fn d(m: i64, exp: i64) -> Dyadic {
    Dyadic::new(m, exp)
}

pub fn scaled(m: i64, exp: i64, i: usize) -> SparseVec {
    SparseVec::unit(i).scaled(&Dyadic::new(m, exp))
}

/// Runs the CLI in-process and returns (exit code, stdout bytes).
pub fn ctype(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let argv = std::iter::once("ctype").chain(args.iter().copied());
    let code = ctype_core::cli::run_with_output(argv, &mut out);
    (code, out)
}
