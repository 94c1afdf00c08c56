//! Certified verification of an explicit Page-type zero bound for real
//! Dirichlet characters.
//!
//! The engine proves, with outward-rounded interval arithmetic throughout,
//! that a contradiction functional F(q, τ, x) is strictly negative over
//! whole boxes of moduli q and zero-gap parameters τ. A certified table of
//! (c, x) witnesses covers moduli from 4·10⁵ (even characters) and 1.5·10⁸
//! (odd characters) up to 9.1·10³², and closed-form inequalities take over
//! beyond that, so that together they certify the constant c in
//! `min(β₁, β₂) ≤ 1 − c/log q` for the two largest real zeros β₁, β₂.
//!
//! Module map:
//! * [`rigor`] — outward-rounded `f64` enclosures, the arithmetic substrate;
//! * [`dd`] — double-double floating point, the high-precision oracle layer;
//! * [`specfun`] — Euler–Maclaurin partial sums, ζ and ζ′ enclosures;
//! * [`charbounds`] — character-sum caps, hybrid tail bounds, L(1) lower
//!   bounds;
//! * [`criterion`] — the W and E error assemblies, F itself, and the
//!   subdivision prover;
//! * [`search`] — per-range (c, x) search, row verification, table I/O;
//! * [`asymptotic`] — the large-moduli closed-form inequalities and
//!   threshold solving;
//! * [`oracle`] — brute-force ground truth at desk scale (real characters,
//!   divisor sums, direct L-values).

pub mod asymptotic;
pub mod charbounds;
pub mod criterion;
pub mod dd;
pub mod oracle;
pub mod rigor;
pub mod search;
pub mod specfun;
