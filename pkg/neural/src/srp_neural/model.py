"""Factored biLSTM encoder-decoder with coverage attention.

One bidirectional LSTM layer encodes the concatenated factor embeddings;
the decoder is an input-feeding LSTM cell with multiplicative global
attention whose scores also see the running coverage vector. The coverage
penalty sum(min(attention, coverage)) is added to the loss.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import torch
from torch import nn
from torch.nn.utils.rnn import pack_padded_sequence, pad_packed_sequence

from srp_neural.data import Batch, Schema


@dataclass
class ModelConfig:
    hidden: int = 450
    target_embedding: int = 300
    dropout: float = 0.3
    coverage_weight: float = 1.0
    beam_size: int = 5
    epochs: int = 20
    lr: float = 1.0
    lr_decay: float = 0.5
    batch_size: int = 32
    grad_clip: float = 5.0
    seed: int = 1
    target_vocab_size: int = 30000
    max_decode_length: int = 40
    extra: dict = field(default_factory=dict)


class FactoredEncoder(nn.Module):
    def __init__(self, schema: Schema, hidden: int, dropout: float):
        super().__init__()
        self.embeddings = nn.ModuleList(
            [nn.Embedding(len(f), f.embedding_size) for f in schema.factors]
        )
        self.dropout = nn.Dropout(dropout)
        self.lstm = nn.LSTM(
            schema.total_dim, hidden, num_layers=1, bidirectional=True, batch_first=True
        )

    def embed(self, src: torch.Tensor) -> torch.Tensor:
        parts = [emb(src[..., k]) for k, emb in enumerate(self.embeddings)]
        return torch.cat(parts, dim=-1)

    def forward(self, src: torch.Tensor, lengths: torch.Tensor):
        emb = self.dropout(self.embed(src))
        packed = pack_padded_sequence(
            emb, lengths.cpu(), batch_first=True, enforce_sorted=False
        )
        output, (h, c) = self.lstm(packed)
        output, _ = pad_packed_sequence(output, batch_first=True, total_length=src.shape[1])
        # (2, B, H) -> (B, 2H)
        h = torch.cat([h[0], h[1]], dim=-1)
        c = torch.cat([c[0], c[1]], dim=-1)
        return output, (h, c)


class CoverageAttention(nn.Module):
    """Multiplicative attention with a learned coverage term in the scores."""

    def __init__(self, hidden: int):
        super().__init__()
        self.project = nn.Linear(hidden, 2 * hidden, bias=False)
        self.coverage_in = nn.Linear(1, 1, bias=False)

    def forward(self, decoder_state, encoder_out, mask, coverage):
        query = self.project(decoder_state).unsqueeze(2)  # (B, 2H, 1)
        scores = torch.bmm(encoder_out, query).squeeze(2)  # (B, S)
        scores = scores + self.coverage_in(coverage.unsqueeze(-1)).squeeze(-1)
        scores = scores.masked_fill(~mask, float("-inf"))
        attention = torch.softmax(scores, dim=-1)
        context = torch.bmm(attention.unsqueeze(1), encoder_out).squeeze(1)  # (B, 2H)
        return attention, context


class Seq2SeqRealizer(nn.Module):
    def __init__(self, schema: Schema, target_vocab_size: int, config: ModelConfig):
        super().__init__()
        self.config = config
        hidden = config.hidden
        self.encoder = FactoredEncoder(schema, hidden, config.dropout)
        self.bridge_h = nn.Linear(2 * hidden, hidden)
        self.bridge_c = nn.Linear(2 * hidden, hidden)
        self.target_embedding = nn.Embedding(target_vocab_size, config.target_embedding)
        self.cell = nn.LSTMCell(config.target_embedding + hidden, hidden)
        self.attention = CoverageAttention(hidden)
        self.combine = nn.Linear(3 * hidden, hidden)
        self.dropout = nn.Dropout(config.dropout)
        self.generator = nn.Linear(hidden, target_vocab_size)

    def encode(self, src, lengths):
        encoder_out, (h, c) = self.encoder(src, lengths)
        state = (torch.tanh(self.bridge_h(h)), torch.tanh(self.bridge_c(c)))
        return encoder_out, state

    def init_feed(self, batch_size: int, device) -> torch.Tensor:
        weight = self.combine.weight
        return torch.zeros(batch_size, self.config.hidden, dtype=weight.dtype, device=device)

    def decode_step(self, token_ids, state, feed, encoder_out, mask, coverage):
        emb = self.target_embedding(token_ids)
        state = self.cell(torch.cat([emb, feed], dim=-1), state)
        attention, context = self.attention(state[0], encoder_out, mask, coverage)
        combined = torch.tanh(self.combine(torch.cat([state[0], context], dim=-1)))
        combined = self.dropout(combined)
        logits = self.generator(combined)
        return state, combined, attention, logits

    def forward(self, batch: Batch):
        """Teacher-forced pass: per-step logits, attentions, coverage penalty."""
        device = batch.src.device
        encoder_out, state = self.encode(batch.src, batch.src_lengths)
        batch_size, steps = batch.tgt_in.shape
        coverage = torch.zeros_like(batch.src_mask, dtype=encoder_out.dtype)
        feed = self.init_feed(batch_size, device)
        all_logits = []
        all_attention = []
        coverage_penalty = torch.zeros((), dtype=encoder_out.dtype, device=device)
        for t in range(steps):
            state, feed, attention, logits = self.decode_step(
                batch.tgt_in[:, t], state, feed, encoder_out, batch.src_mask, coverage
            )
            step_mask = batch.tgt_mask[:, t].to(attention.dtype).unsqueeze(-1)
            coverage_penalty = coverage_penalty + (
                torch.minimum(attention, coverage) * step_mask
            ).sum()
            coverage = coverage + attention * step_mask
            all_logits.append(logits)
            all_attention.append(attention)
        return (
            torch.stack(all_logits, dim=1),
            torch.stack(all_attention, dim=1),
            coverage_penalty,
        )

    def loss(self, batch: Batch):
        """(total objective, nll sum, token count, attentions) for one batch."""
        logits, attentions, coverage_penalty = self(batch)
        log_probs = torch.log_softmax(logits, dim=-1)
        picked = log_probs.gather(-1, batch.tgt_out.unsqueeze(-1)).squeeze(-1)
        mask = batch.tgt_mask.to(picked.dtype)
        nll = -(picked * mask).sum()
        tokens = mask.sum()
        objective = (nll + self.config.coverage_weight * coverage_penalty) / tokens
        return objective, nll, tokens, attentions
