from .tensor import (Tensor, DEFAULT_DTYPE, add, sub, mul, matmul, sigmoid,
                     tanh, relu, log, tsum, mean, index, concat, embedding,
                     softmax, log_softmax, bce_with_logits, gru_sequence,
                     tile_rows)
from .layers import (Module, Gru, BiGru, Mlp, Linear, Embedding, gru_step,
                     bigru_encode_ids, reverse_padded, fan_in_init,
                     uniform_init)
from .adam import Adam, clip_grad_norm
from .checkpoint import (MAGIC, CheckpointError, save_tensors, load_tensors,
                         save_module, load_module)
