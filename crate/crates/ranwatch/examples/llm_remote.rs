//! Drive a real chat-completion inference server (vLLM, llama.cpp,
//! anything speaking the common chat-completions shape).
//!
//! Point the client at your server first:
//!
//! ```bash
//! export RANWATCH_ENDPOINT=http://127.0.0.1:8000/v1/chat/completions
//! export RANWATCH_MODEL=meta-llama/Llama-3.1-8B-Instruct
//! cargo run --release -p ranwatch --example llm_remote
//! ```
//!
//! Requests go out with temperature 0 and the task description as the
//! system message. Without a reachable server this example explains itself
//! and exits.

use anyhow::Result;

use ranwatch::eval::{run_llm_experiment, EvalOptions};
use ranwatch::forge::{forge_dataset, ForgeConfig};
use ranwatch::llm::{Backend, PromptTemplate, Prompt, RemoteBackend};
use ranwatch::RunConfig;

fn main() -> Result<()> {
    let config = RunConfig::load(None)?;
    println!(
        "endpoint: {}\nmodel:    {}\n",
        config.backend.endpoint, config.backend.model
    );

    let mut probe = RemoteBackend::new(config.backend.clone())
        .map_err(|e| anyhow::anyhow!(e.to_string()))?;
    let ping = Prompt {
        system: "Connectivity check.".into(),
        user: "Respond with the single word: Normal".into(),
        template_version: "probe".into(),
    };
    match probe.complete(&ping) {
        Ok(response) => println!("server reachable, probe response: {response:?}\n"),
        Err(err) => {
            eprintln!("inference server unreachable: {err}");
            eprintln!("set RANWATCH_ENDPOINT / RANWATCH_MODEL and start your server, then re-run.");
            return Ok(());
        }
    }

    let forged = forge_dataset(&ForgeConfig::default())?;
    let w = 3;
    println!("classifying all {} messages at w={w}; this calls the server once per message...", forged.messages.len());
    let mut backend = RemoteBackend::new(config.backend.clone())
        .map_err(|e| anyhow::anyhow!(e.to_string()))?;
    let report = run_llm_experiment(
        &forged.messages,
        &mut backend,
        &PromptTemplate::default(),
        w,
        &EvalOptions::default(),
    )?;

    let m = report.metrics.unwrap();
    println!("\nverdicts: {} (indeterminate {})", report.messages_evaluated, report.indeterminate);
    println!("accuracy {:.3}  precision {:.3}  recall {:.3}  f1 {:.3}", m.accuracy, m.precision, m.recall, m.f1);
    println!("mean latency {:.3}s  max {:.3}s  retried {}", report.mean_latency_s, report.max_latency_s, report.retried);
    println!("messages over the 1s Near-RT budget: {:?}", report.latency_violations);
    Ok(())
}
