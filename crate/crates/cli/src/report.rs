use tbss_core::engine::{RunResult, Verdict};

/// The `key: value` block printed after a run.
pub fn verdict_block(res: &RunResult) -> String {
    let v = &res.verdict;
    let mut lines = vec![("summary", v.to_string())];
    match v {
        Verdict::Halted { stage, output } => {
            lines.push(("verdict", "halted".into()));
            lines.push(("stage", stage.to_string()));
            lines.push(("output", output.to_string()));
        }
        Verdict::Diverged { loop_start, loop_end } => {
            lines.push(("verdict", "diverged".into()));
            lines.push(("witness", format!("({loop_start}, {loop_end})")));
        }
        Verdict::Crashed { stage, reason } => {
            lines.push(("verdict", "crashed".into()));
            lines.push(("stage", stage.to_string()));
            lines.push(("reason", reason.to_string()));
        }
        Verdict::Unresolved { stage, register } => {
            lines.push(("verdict", "unresolved".into()));
            lines.push(("stage", stage.to_string()));
            if let Some(r) = register {
                lines.push(("register", format!("R{}", r + 1)));
            }
        }
        Verdict::BudgetExhausted { stage, snapshot } => {
            lines.push(("verdict", "budget-exhausted".into()));
            lines.push(("stage", stage.to_string()));
            lines.push(("snapshot", snapshot.to_string()));
        }
    }
    lines.push(("steps", res.steps.to_string()));
    lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}
