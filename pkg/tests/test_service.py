"""Tests for the chat service client and its response cache."""
import os
from unittest.mock import AsyncMock, patch

import aiohttp
import pytest

from repo_drift.exceptions import ConfigError, ServiceError
from repo_drift.llm.cache import ResponseCache
from repo_drift.llm.service import ChatServiceClient, system_user


def _reply(content):
    return {"choices": [{"message": {"role": "assistant", "content": content}}]}


@pytest.fixture
def client(tmp_path):
    """Client with a cache directory and no retries."""
    return ChatServiceClient(
        "http://llm.local/v1/chat/completions",
        "test-model",
        api_key="secret",
        retries=0,
        cache=ResponseCache(str(tmp_path / "cache")),
    )


class TestChatServiceClient:
    """Test the aiohttp client."""

    def test_requires_endpoint_and_model(self):
        """Test missing settings raise ConfigError."""
        with pytest.raises(ConfigError):
            ChatServiceClient("", "model")
        with pytest.raises(ConfigError):
            ChatServiceClient("http://x", "")

    def test_from_env(self, tmp_path):
        """Test environment configuration."""
        env = {
            "DRIFT_LLM_ENDPOINT": "http://llm.local/v1/chat/completions",
            "DRIFT_LLM_MODEL": "m",
            "DRIFT_LLM_TIMEOUT": "5",
            "DRIFT_LLM_RETRIES": "0",
        }
        client = ChatServiceClient.from_env(str(tmp_path), environ=env)
        assert client.timeout == 5
        assert client.retries == 0
        assert client.api_key is None
        assert client.cache is not None

    def test_from_env_errors(self):
        """Test missing or malformed environment values."""
        with pytest.raises(ConfigError):
            ChatServiceClient.from_env(environ={})
        with pytest.raises(ConfigError):
            ChatServiceClient.from_env(
                environ={"DRIFT_LLM_ENDPOINT": "http://x", "DRIFT_LLM_MODEL": "m", "DRIFT_LLM_TIMEOUT": "soon"}
            )

    async def test_complete_success(self, client):
        """Test a successful request returns the message content."""
        with patch("aiohttp.ClientSession.post") as mock_post:
            mock_post.return_value.__aenter__.return_value = AsyncMock(
                status=200, json=AsyncMock(return_value=_reply('["src/flask/app.py"]'))
            )
            text = await client.async_complete(system_user("sys", "user"), 0.0)

        assert text == '["src/flask/app.py"]'
        _, kwargs = mock_post.call_args
        assert kwargs["json"]["model"] == "test-model"
        assert kwargs["json"]["temperature"] == 0.0
        assert kwargs["headers"]["Authorization"] == "Bearer secret"

    async def test_cache_replay(self, client):
        """Test a cached reply is served without a request."""
        messages = system_user("sys", "user")
        with patch("aiohttp.ClientSession.post") as mock_post:
            mock_post.return_value.__aenter__.return_value = AsyncMock(
                status=200, json=AsyncMock(return_value=_reply("cached answer"))
            )
            await client.async_complete(messages, 0.2)
            assert await client.async_complete(messages, 0.2) == "cached answer"
            assert mock_post.call_count == 1

            await client.async_complete(messages, 0.2, attempt=1)
            assert mock_post.call_count == 2

    async def test_http_error(self, client):
        """Test non-200 replies raise ServiceError."""
        with patch("aiohttp.ClientSession.post") as mock_post:
            mock_post.return_value.__aenter__.return_value = AsyncMock(
                status=500, text=AsyncMock(return_value="boom")
            )
            with pytest.raises(ServiceError):
                await client.async_complete(system_user("sys", "user"))

    async def test_bad_shape(self, client):
        """Test an unexpected JSON shape raises ServiceError."""
        with patch("aiohttp.ClientSession.post") as mock_post:
            mock_post.return_value.__aenter__.return_value = AsyncMock(
                status=200, json=AsyncMock(return_value={"choices": []})
            )
            with pytest.raises(ServiceError):
                await client.async_complete(system_user("sys", "user"))

    async def test_retries_connection_errors(self, tmp_path):
        """Test client errors are retried before giving up."""
        client = ChatServiceClient("http://llm.local", "m", retries=2)
        with patch("aiohttp.ClientSession.post") as mock_post:
            mock_post.side_effect = aiohttp.ClientConnectionError("refused")
            with pytest.raises(ServiceError, match="after 3 tries"):
                await client.async_complete(system_user("sys", "user"))
            assert mock_post.call_count == 3


class TestResponseCache:
    """Test the on-disk cache."""

    def test_put_get(self, tmp_path):
        """Test records round-trip by key."""
        cache = ResponseCache(str(tmp_path))
        key = "ab" + "0" * 62
        assert cache.get(key) is None
        cache.put(key, {"response": {"content": "x"}})
        assert key in cache
        assert cache.get(key) == {"response": {"content": "x"}}
        assert os.path.isfile(tmp_path / "ab" / f"{key}.json")

    def test_unreadable_entry_ignored(self, tmp_path):
        """Test corrupt entries read as misses."""
        cache = ResponseCache(str(tmp_path))
        key = "cd" + "1" * 62
        (tmp_path / "cd").mkdir()
        (tmp_path / "cd" / f"{key}.json").write_text("{broken")
        assert cache.get(key) is None

    def test_no_temp_files_left(self, tmp_path):
        """Test atomic writes leave no partial files behind."""
        cache = ResponseCache(str(tmp_path))
        cache.put("ef" + "2" * 62, {"response": {"content": "y"}})
        assert [name for name in os.listdir(tmp_path / "ef") if name.endswith(".part")] == []
