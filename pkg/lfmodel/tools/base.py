# -*- coding: utf-8 -*-
"""
命令基类模块

为命令行与批处理接口提供命令定义、执行与并行调度的基础设施。

使用示例：
    ```python
    from lfmodel.tools import Command, CommandResult, CommandKit

    class ValidateCommand(Command):
        name = "validate"
        description = "加载数据并输出摘要"

        def execute(self, spec) -> CommandResult:
            return CommandResult.ok({"series": 3})

    kit = CommandKit([ValidateCommand()])
    result = kit.run("validate", spec)
    ```
"""

import json
import logging
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, TypeVar

from lfmodel.core.errors import ToolkitError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# 未预期异常的退出码
INTERNAL_ERROR_CODE = 1


# ============================================================================
# 命令执行结果
# ============================================================================


@dataclass
class CommandResult:
    """命令执行结果"""

    success: bool
    data: Any = None
    error: Optional[Dict[str, Any]] = None
    files: List[str] = field(default_factory=list)

    @classmethod
    def ok(cls, data: Any = None, files: Optional[List[str]] = None) -> "CommandResult":
        return cls(success=True, data=data, files=list(files or []))

    @classmethod
    def fail(cls, record: Dict[str, Any]) -> "CommandResult":
        return cls(success=False, error=record)

    @property
    def exit_code(self) -> int:
        if self.success:
            return 0
        return int((self.error or {}).get("exit_code", INTERNAL_ERROR_CODE))

    def __str__(self) -> str:
        if not self.success:
            return json.dumps(self.error, ensure_ascii=False, sort_keys=True)
        if self.data is None:
            return "Success"
        if isinstance(self.data, str):
            return self.data
        try:
            return json.dumps(self.data, ensure_ascii=False, indent=2, sort_keys=True)
        except (TypeError, ValueError):
            return str(self.data)


# ============================================================================
# 命令基类
# ============================================================================


class Command(ABC):
    """命令基类，子类需定义 name/description 并实现 execute"""

    name: str = ""
    description: str = ""

    def __init__(self):
        assert self.name, f"{self.__class__.__name__} must define 'name'"
        assert self.description, f"{self.__class__.__name__} must define 'description'"

    @abstractmethod
    def execute(self, spec: Any) -> CommandResult:
        """执行命令"""
        pass

    def safe_execute(self, spec: Any) -> CommandResult:
        """安全执行：工具包异常转换为错误记录，不向外抛出"""
        try:
            logger.info(f"[{self.name}] 开始执行")
            return self.execute(spec)
        except ToolkitError as e:
            logger.error(f"[{self.name}] {e.__class__.__name__}: {e.message}")
            return CommandResult.fail(e.to_record())
        except Exception as e:
            logger.exception(f"Command {self.name} execution failed")
            return CommandResult.fail(
                {
                    "error": "InternalError",
                    "message": f"{e.__class__.__name__}: {e}",
                    "exit_code": INTERNAL_ERROR_CODE,
                    "details": {},
                }
            )

    def __repr__(self) -> str:
        return f"Command({self.name})"


# ============================================================================
# 命令集管理
# ============================================================================


class CommandKit:
    """命令集管理器"""

    def __init__(self, commands: Optional[List[Command]] = None):
        self._commands: Dict[str, Command] = {}
        for command in commands or []:
            self.register(command)

    def register(self, command: Command) -> "CommandKit":
        """注册命令"""
        self._commands[command.name] = command
        return self

    def get(self, name: str) -> Optional[Command]:
        return self._commands.get(name)

    def run(self, name: str, spec: Any) -> CommandResult:
        """按名称执行命令"""
        command = self._commands.get(name)
        if not command:
            return CommandResult.fail(
                {
                    "error": "UnknownCommand",
                    "message": f"Unknown command: {name}. Available: {self.names}",
                    "exit_code": INTERNAL_ERROR_CODE + 1,
                    "details": {},
                }
            )
        return command.safe_execute(spec)

    @property
    def names(self) -> List[str]:
        return list(self._commands.keys())

    def get_descriptions(self) -> str:
        """命令说明（用于 --help）"""
        return "\n".join(f"  {c.name:<10} {c.description}" for c in self._commands.values())

    def __len__(self) -> int:
        return len(self._commands)

    def __contains__(self, name: str) -> bool:
        return name in self._commands

    def __repr__(self) -> str:
        return f"CommandKit({self.names})"


# ============================================================================
# 有序并行执行
# ============================================================================


def parallel_map(
    func: Callable[[T], R],
    items: Iterable[T],
    max_workers: int = 1,
) -> List[R]:
    """
    并行执行 func，结果顺序与输入一致

    max_workers <= 1 时顺序执行；异常原样抛出。
    """
    items = list(items)
    if not items:
        return []
    if max_workers <= 1 or len(items) == 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=min(max_workers, len(items))) as executor:
        futures = [executor.submit(func, item) for item in items]
        # 按原始顺序收集结果
        return [f.result() for f in futures]
