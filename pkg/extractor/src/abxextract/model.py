"""Encoder loading and single-chunk inference.

Two backends share one code path:

- ``untrained:<arch>`` builds a randomly initialized wav2vec2-style encoder
  locally (arch one of ``large``, ``base``, ``tiny``) with a fixed init seed,
  so it works offline and reproduces bit-identically across processes. Useful
  for plumbing, format and timing work; the representations are meaningless.
- any other identifier is treated as a pretrained checkpoint and loaded via
  ``transformers`` (local cache or hub).

Layer indexing: 0 is the output of the convolutional front-end after
projection into the transformer width; k in 1..num_layers is the output of
transformer block k.
"""
from dataclasses import dataclass

import numpy as np
import torch

from .errors import LayerOutOfRange, ModelUnavailable

_UNTRAINED_PREFIX = "untrained:"
_UNTRAINED_SEED = 0

# geometry only; weights are random
_ARCHS = {
    "large": dict(hidden_size=1024, num_hidden_layers=24, num_attention_heads=16,
                  intermediate_size=4096, do_stable_layer_norm=True,
                  feat_extract_norm="layer"),
    "base": dict(hidden_size=768, num_hidden_layers=12, num_attention_heads=12,
                 intermediate_size=3072, do_stable_layer_norm=False,
                 feat_extract_norm="group"),
    "tiny": dict(hidden_size=64, num_hidden_layers=2, num_attention_heads=4,
                 intermediate_size=128, conv_dim=(64,) * 7,
                 do_stable_layer_norm=True, feat_extract_norm="layer"),
}


@dataclass
class LoadedEncoder:
    model: "torch.nn.Module"
    num_layers: int
    hidden_size: int
    conv_kernel: tuple[int, ...]
    conv_stride: tuple[int, ...]
    device: str

    def hidden_frames(self, samples: np.ndarray, layer_index: int) -> np.ndarray:
        """Run one chunk through the encoder; (n_frames, hidden_size) float32."""
        if not 0 <= layer_index <= self.num_layers:
            raise LayerOutOfRange(
                f"layer_index {layer_index} outside 0..{self.num_layers}"
            )
        batch = torch.from_numpy(np.asarray(samples, dtype=np.float32))[None, :]
        with torch.inference_mode():
            out = self.model(batch.to(self.device), output_hidden_states=True)
        return out.hidden_states[layer_index][0].cpu().numpy().astype(np.float32)


def load_encoder(model_id: str, device: str = "cpu") -> LoadedEncoder:
    try:
        from transformers import Wav2Vec2Config, Wav2Vec2Model
    except Exception as exc:  # pragma: no cover - import environment problem
        raise ModelUnavailable(f"transformers is not importable: {exc}") from exc

    if model_id.startswith(_UNTRAINED_PREFIX):
        arch = model_id[len(_UNTRAINED_PREFIX):]
        if arch not in _ARCHS:
            raise ModelUnavailable(
                f"unknown untrained arch {arch!r}; choose from {sorted(_ARCHS)}"
            )
        torch.manual_seed(_UNTRAINED_SEED)
        config = Wav2Vec2Config(**_ARCHS[arch])
        model = Wav2Vec2Model(config)
    else:
        try:
            model = Wav2Vec2Model.from_pretrained(model_id)
        except Exception as exc:
            raise ModelUnavailable(f"cannot load {model_id!r}: {exc}") from exc
        config = model.config

    model = model.to(device).eval()
    return LoadedEncoder(
        model=model,
        num_layers=int(config.num_hidden_layers),
        hidden_size=int(config.hidden_size),
        conv_kernel=tuple(int(k) for k in config.conv_kernel),
        conv_stride=tuple(int(s) for s in config.conv_stride),
        device=device,
    )
