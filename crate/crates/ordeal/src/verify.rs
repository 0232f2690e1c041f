//! Global verification switch.
//!
//! When enabled, library routines recompute key quantities along an
//! independent second route and assert agreement.  The checks are pure
//! overhead (they change no results), so the flag defaults to off and is
//! flipped by the CLI's `--verify` or by tests.

use std::sync::atomic::{AtomicBool, Ordering};

static VERIFY: AtomicBool = AtomicBool::new(false);

pub fn set_enabled(on: bool) {
    VERIFY.store(on, Ordering::Relaxed);
}

pub fn enabled() -> bool {
    VERIFY.load(Ordering::Relaxed)
}

/// Runs `check` only in verification mode; panics with `context` on failure.
pub fn check(context: &str, check: impl FnOnce() -> bool) {
    if enabled() && !check() {
        panic!("verification failed: {context}");
    }
}
