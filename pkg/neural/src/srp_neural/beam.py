"""Greedy and beam decoding with attention-argmax unknown replacement.

Whenever the decoder emits the unknown symbol, the output token is
replaced by the surface field of the source token with the highest
attention weight at that step. Beam hypotheses accumulate raw log
probabilities but the final candidate is picked by length-normalized
score, which counters the short-output bias of totals.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch

from srp_neural.data import BOS, EOS, UNK, SourceSentence, TargetVocab
from srp_neural.model import Seq2SeqRealizer


@dataclass
class DecodedSentence:
    tokens: list[str]
    attentions: list[torch.Tensor]  # one (S,) attention row per emitted token
    score: float


def _resolve(token_id: int, attention: torch.Tensor, vocab: TargetVocab,
             source: SourceSentence) -> str:
    if token_id == UNK:
        return source.surfaces[int(attention.argmax().item())]
    return vocab.symbols[token_id]


@torch.no_grad()
def greedy_decode(
    model: Seq2SeqRealizer,
    source: SourceSentence,
    vocab: TargetVocab,
    max_length: int | None = None,
) -> DecodedSentence:
    model.eval()
    limit = max_length or model.config.max_decode_length
    src = source.indices.unsqueeze(0)
    lengths = torch.tensor([source.indices.shape[0]])
    mask = torch.ones(1, source.indices.shape[0], dtype=torch.bool)
    encoder_out, state = model.encode(src, lengths)
    coverage = torch.zeros(1, source.indices.shape[0], dtype=encoder_out.dtype)
    feed = model.init_feed(1, src.device)
    prev = torch.tensor([BOS])
    tokens: list[str] = []
    rows: list[torch.Tensor] = []
    score = 0.0
    for _ in range(limit):
        state, feed, attention, logits = model.decode_step(
            prev, state, feed, encoder_out, mask, coverage
        )
        coverage = coverage + attention
        log_probs = torch.log_softmax(logits, dim=-1)
        token_id = int(log_probs.argmax(dim=-1).item())
        score += float(log_probs[0, token_id].item())
        if token_id == EOS:
            break
        tokens.append(_resolve(token_id, attention[0], vocab, source))
        rows.append(attention[0].clone())
        prev = torch.tensor([token_id])
    return DecodedSentence(tokens, rows, score)


@dataclass
class _Hypothesis:
    token_ids: list[int]
    surface: list[str]
    attentions: list[torch.Tensor]
    state: tuple[torch.Tensor, torch.Tensor]
    feed: torch.Tensor
    coverage: torch.Tensor
    score: float
    finished: bool = False

    @property
    def normalized(self) -> float:
        return self.score / max(len(self.token_ids) - 1, 1)


@torch.no_grad()
def beam_decode(
    model: Seq2SeqRealizer,
    source: SourceSentence,
    vocab: TargetVocab,
    beam_size: int | None = None,
    max_length: int | None = None,
) -> DecodedSentence:
    model.eval()
    beam = beam_size or model.config.beam_size
    if beam == 1:
        return greedy_decode(model, source, vocab, max_length)
    limit = max_length or model.config.max_decode_length
    src = source.indices.unsqueeze(0)
    lengths = torch.tensor([source.indices.shape[0]])
    mask = torch.ones(1, source.indices.shape[0], dtype=torch.bool)
    encoder_out, state = model.encode(src, lengths)
    start = _Hypothesis(
        token_ids=[BOS],
        surface=[],
        attentions=[],
        state=state,
        feed=model.init_feed(1, src.device),
        coverage=torch.zeros(1, source.indices.shape[0], dtype=encoder_out.dtype),
        score=0.0,
    )
    live = [start]
    done: list[_Hypothesis] = []
    limit = min(limit, source.indices.shape[0] + 5)
    for _ in range(limit):
        candidates: list[_Hypothesis] = []
        for hyp in live:
            prev = torch.tensor([hyp.token_ids[-1]])
            new_state, feed, attention, logits = model.decode_step(
                prev, hyp.state, hyp.feed, encoder_out, mask, hyp.coverage
            )
            log_probs = torch.log_softmax(logits, dim=-1).squeeze(0)
            top = torch.topk(log_probs, beam)
            for token_id, log_p in zip(top.indices.tolist(), top.values.tolist()):
                extended = _Hypothesis(
                    token_ids=hyp.token_ids + [token_id],
                    surface=list(hyp.surface),
                    attentions=list(hyp.attentions),
                    state=new_state,
                    feed=feed,
                    coverage=hyp.coverage + attention,
                    score=hyp.score + log_p,
                )
                if token_id == EOS:
                    extended.finished = True
                else:
                    extended.surface.append(
                        _resolve(token_id, attention[0], vocab, source)
                    )
                    extended.attentions.append(attention[0].clone())
                candidates.append(extended)
        candidates.sort(key=lambda h: h.score, reverse=True)
        done.extend(c for c in candidates if c.finished)
        live = [c for c in candidates if not c.finished][:beam]
        if not live:
            break
        # log-probability totals only decrease as live hypotheses extend, so
        # once the best finished total beats the best live total we can stop
        if done and max(h.score for h in done) >= live[0].score:
            break
    pool = done or live
    best = max(pool, key=lambda h: h.normalized)
    return DecodedSentence(best.surface, best.attentions, best.score)


def decode_corpus(
    model: Seq2SeqRealizer,
    sources: list[SourceSentence],
    vocab: TargetVocab,
    beam_size: int | None = None,
) -> list[list[str]]:
    out = []
    for source in sources:
        decoded = beam_decode(model, source, vocab, beam_size=beam_size)
        out.append(decoded.tokens)
    return out
