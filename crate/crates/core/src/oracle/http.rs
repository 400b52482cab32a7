use std::time::Duration;

use serde_json::{json, Value};

use super::{build_prompt, parse_reply, DecisionOracle, OracleError, PromptContext, Template};

/// Asks a chat-completion endpoint, one fresh single-message conversation
/// per decision.
#[derive(Debug, Clone)]
pub struct HttpOracle {
    pub endpoint: String,
    pub model: String,
    pub template: Template,
    /// Sent as `Authorization: Bearer <token>`.
    pub token: Option<String>,
    pub temperature: f64,
    /// Further attempts after an unusable reply.
    pub max_retries: u32,
    pub timeout: Duration,
}

impl HttpOracle {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>, template: Template) -> Self {
        HttpOracle {
            endpoint: endpoint.into(),
            model: model.into(),
            template,
            token: None,
            temperature: 0.0,
            max_retries: 3,
            timeout: Duration::from_secs(60),
        }
    }

    fn ask(&self, agent: &ureq::Agent, prompt: &str) -> Result<String, OracleError> {
        let body = json!({
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.temperature,
        });
        let mut request = agent.post(&self.endpoint);
        if let Some(token) = &self.token {
            request = request.header("Authorization", &format!("Bearer {token}"));
        }
        let reply: Value = request
            .send_json(&body)
            .map_err(|e| OracleError::Transport(e.to_string()))?
            .body_mut()
            .read_json()
            .map_err(|e| OracleError::BadResponse(e.to_string()))?;
        reply_text(&reply).ok_or_else(|| OracleError::BadResponse(reply.to_string()))
    }
}

/// Message text from the common response shapes.
fn reply_text(v: &Value) -> Option<String> {
    [
        v.pointer("/choices/0/message/content"),
        v.pointer("/message/content"),
        v.pointer("/messages/0/content"),
    ]
    .into_iter()
    .flatten()
    .find_map(|c| c.as_str().map(str::to_string))
}

impl DecisionOracle for HttpOracle {
    fn decide(&mut self, ctx: &PromptContext) -> Result<usize, OracleError> {
        let prompt = build_prompt(ctx, self.template)?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build()
            .into();
        let attempts = self.max_retries + 1;
        let mut last = String::new();
        for _ in 0..attempts {
            last = self.ask(&agent, &prompt)?;
            if let Ok(i) = parse_reply(&last, ctx.choices.len()) {
                return Ok(i);
            }
        }
        Err(OracleError::RetriesExhausted { attempts, last })
    }
}
