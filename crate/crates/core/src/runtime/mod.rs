//! Agent runtime: system-prompt assembly, the budgeted tool-calling loop,
//! the daily activation scheduler, and the multi-day simulation driver.

pub mod agent_loop;
pub mod prompt;
pub mod scheduler;
pub mod simulation;

pub use agent_loop::{
    run_agent_turn, RetryPolicy, RunTrace, TerminalReason, ToolCallRecord, TurnBudget,
    WriteActionRecord,
};
pub use prompt::{
    build_system_prompt, SystemPromptSpec, PLATFORM_INSTRUCTIONS, PROMPT_VERSION,
    REDACTION_DIRECTIVE,
};
pub use scheduler::schedule_day;
pub use simulation::{assign_backends, run_simulation, SimAgent, SimulationConfig};
