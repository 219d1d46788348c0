# -*- coding: utf-8 -*-
"""命令基类与并行工具测试"""

import time

import pytest

from lfmodel.core.errors import InsufficientLength
from lfmodel.tools import INTERNAL_ERROR_CODE, Command, CommandKit, CommandResult, parallel_map


class EchoCommand(Command):
    name = "echo"
    description = "原样返回"

    def execute(self, spec):
        if spec == "short":
            raise InsufficientLength("need more points", length=3)
        if spec == "boom":
            raise RuntimeError("unexpected")
        return CommandResult.ok({"echo": spec}, ["a.json"])


class TestCommand:
    """命令执行与错误记录"""

    def test_success(self):
        result = EchoCommand().safe_execute("x")
        assert result.success
        assert result.exit_code == 0
        assert result.files == ["a.json"]
        assert '"echo": "x"' in str(result)

    def test_toolkit_error_becomes_record(self):
        result = EchoCommand().safe_execute("short")
        assert not result.success
        assert result.exit_code == InsufficientLength.exit_code
        assert result.error["error"] == "InsufficientLength"
        assert result.error["details"] == {"length": 3}

    def test_unexpected_error_is_internal(self):
        result = EchoCommand().safe_execute("boom")
        assert result.exit_code == INTERNAL_ERROR_CODE
        assert result.error["error"] == "InternalError"
        assert "RuntimeError" in result.error["message"]

    def test_must_define_name(self):
        class Nameless(Command):
            description = "无名"

            def execute(self, spec):
                return CommandResult.ok()

        with pytest.raises(AssertionError):
            Nameless()


class TestCommandKit:
    """命令集"""

    def test_dispatch(self):
        kit = CommandKit([EchoCommand()])
        assert "echo" in kit
        assert len(kit) == 1
        assert kit.run("echo", 1).data == {"echo": 1}
        assert "echo" in kit.get_descriptions()

    def test_unknown_command(self):
        result = CommandKit([EchoCommand()]).run("nope", None)
        assert result.exit_code == INTERNAL_ERROR_CODE + 1
        assert result.error["error"] == "UnknownCommand"


class TestParallelMap:
    """有序并行"""

    def test_order_preserved(self):
        def slow_square(x):
            time.sleep(0.01 * (5 - x))
            return x * x

        assert parallel_map(slow_square, range(5), max_workers=4) == [0, 1, 4, 9, 16]

    def test_sequential_matches_parallel(self):
        items = list(range(20))
        assert parallel_map(str, items) == parallel_map(str, items, max_workers=3)

    def test_empty(self):
        assert parallel_map(str, [], max_workers=4) == []

    def test_exception_propagates(self):
        def fail(x):
            raise ValueError(x)

        with pytest.raises(ValueError):
            parallel_map(fail, [1, 2], max_workers=2)
