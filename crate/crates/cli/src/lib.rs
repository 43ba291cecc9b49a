//! Instance parsing, command dispatch and report emission for the `adic`
//! binary.

pub mod commands;
pub mod instance;
pub mod report;

use std::time::Instant;

use serde_json::Value;

pub use commands::{run_command, CommandError, Options, COMMANDS};
pub use instance::{parse_instance, Instance, InstanceError};

/// Exit status: 0 on pass, 2 on an inconsistent verdict, 1 on input errors.
pub fn execute(cmd: &str, instance_text: &str, opts: &Options, timing: bool) -> (Value, i32) {
    let inst = match parse_instance(instance_text) {
        Ok(i) => i,
        Err(e) => return (report::parse_error(cmd, &e), 1),
    };
    if !COMMANDS.contains(&cmd) {
        return (report::command_error(cmd, Some(&inst), &CommandError::UnknownCommand(cmd.into())), 1);
    }
    let start = Instant::now();
    match run_command(cmd, &inst, opts) {
        Ok(out) => {
            let code = if out.pass { 0 } else { 2 };
            let mut r = report::success(cmd, &inst, opts, out);
            if timing {
                r["timing"] = serde_json::json!({ "micros": start.elapsed().as_micros() as u64 });
            }
            (r, code)
        }
        Err(e) => (report::command_error(cmd, Some(&inst), &e), 1),
    }
}
