//! Supervisory control synthesis for timed automata whose controllable
//! events may be forcible, i.e. able to preempt the passage of time.

pub mod model;
pub mod regions;
pub mod cli;
pub mod synthesis;
pub mod oracle;
