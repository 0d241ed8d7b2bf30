//! LLM gateway with cassette record/replay, prompt templates, and the
//! workflow state machines that drive ontology generation sessions.

mod error;
pub mod cassette;
pub mod clock;
pub mod gateway;
pub mod prompts;
pub mod provider;
pub mod session;
pub mod workflow;

pub use cassette::{Cassette, CassetteEntry, CassetteMode};
pub use clock::{Clock, LogicalClock, SystemClock};
pub use error::{LlmError, ProviderError, TemplateError, WorkflowError};
pub use gateway::{Gateway, RetryPolicy};
pub use session::{involvement_level, Methodology, SessionState, WorkflowSession};
pub use workflow::{Engine, Generation, HumanInput, Supervision};
