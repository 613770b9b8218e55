//! Contact process simulation: an exact Gillespie engine, a graphical
//! representation on a bounded window, lit/hot predicates, and the star and
//! escape trials.

mod fenwick;
mod gillespie;
mod predicates;
mod state;
mod trials;
mod window;

pub use gillespie::{gillespie_run, ContactConfig, Outcome, Simulation, Step, Transition, TransitionKind};
pub use predicates::{hot_threshold, is_hot, is_lit, lit_threshold};
pub use state::{ContactState, Init};
pub use trials::{escape_trial, star_survival_trial, star_survival_trial_until, EscapeResult, StarOutcome};
pub use window::{
    graphical_window, graphical_window_with_limit, slab_counts, ArrowList, EventTimeline, TimelineEvent,
    DEFAULT_WINDOW_LIMIT,
};
