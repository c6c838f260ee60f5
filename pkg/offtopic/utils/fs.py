#!/usr/bin/env python
# Copyright 2024 Bytedance Ltd. and/or its affiliates
# Copyright 2024 The offtopic Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# -*- coding: utf-8 -*-
"""Content-addressed file helpers for the on-disk cache"""
import hashlib
import json
import os
import tempfile

from filelock import FileLock

__all__ = ['md5_encode', 'sha256_encode', 'get_local_cache_path', 'atomic_write', 'read_json', 'key_lock']


def md5_encode(path: str) -> str:
    return hashlib.md5(path.encode()).hexdigest()


def sha256_encode(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def get_local_cache_path(digest: str, cache_dir: str, subdir: str, suffix: str = '') -> str:
    """Return the path of ``digest`` under ``cache_dir/subdir``, sharded by its first two characters.

    Args:
        digest: a hex digest used as the file name.
        cache_dir: the cache root.
        subdir: ``blobs`` or ``index``.
        suffix: appended to the file name.

    Returns:
        an absolute path. Its parent directory is only created by ``atomic_write``.
    """
    return os.path.join(cache_dir, subdir, digest[:2], digest + suffix)


def atomic_write(path: str, data: bytes):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=os.path.dirname(path), prefix='.tmp-')
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def read_json(path: str):
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def key_lock(cache_dir: str, key: str) -> FileLock:
    """A lock serializing writers of one cache key."""
    lock_dir = os.path.join(cache_dir, 'locks')
    os.makedirs(lock_dir, exist_ok=True)
    return FileLock(os.path.join(lock_dir, md5_encode(key) + '.lock'))
