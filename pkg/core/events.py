"""
Event system for IceLine
Integrator events and a small pub/sub emitter so analysis code can watch
an integration (and stop it) without the integrator knowing about it
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Any, TYPE_CHECKING

if TYPE_CHECKING:
    from .filippov import PlanarState, Boundary

logger = logging.getLogger(__name__)


class EventKind(Enum):
    """Things that can happen along a trajectory"""
    BOUNDARY_HIT = "boundary_hit"
    SLIDING_ENTRY = "sliding_entry"
    SLIDING_EXIT = "sliding_exit"
    TANGENCY_CROSS = "tangency_cross"
    SECTION_CROSS = "section_cross"


@dataclass(frozen=True)
class Event:
    """One logged event; `state` is the state at the event time"""
    kind: EventKind
    t: float
    state: "PlanarState"
    boundary: Optional["Boundary"] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            't': self.t,
            'A': self.state.x,
            'eta': self.state.y,
            'mode': self.state.mode.value,
            'boundary': self.boundary.value if self.boundary is not None else None,
        }


Listener = Callable[[Event], Optional[bool]]


class EventEmitter:
    """
    Simple event emitter for pub/sub pattern

    A listener may return True to ask the publisher to stop.

    Usage:
        emitter = EventEmitter()

        def on_exit(event):
            print(f"left the boundary at A={event.state.x}")
            return True  # stop integrating

        emitter.on(EventKind.SLIDING_EXIT, on_exit)
        integrator = FilippovIntegrator(field, cfg, emitter=emitter)
    """

    def __init__(self):
        self._listeners: Dict[EventKind, List[Listener]] = {}
        self._once_listeners: Dict[EventKind, List[Listener]] = {}

    def on(self, kind: EventKind, callback: Listener) -> None:
        """Subscribe to an event kind"""
        self._listeners.setdefault(kind, []).append(callback)

    def once(self, kind: EventKind, callback: Listener) -> None:
        """Subscribe to an event kind, but only fire once"""
        self._once_listeners.setdefault(kind, []).append(callback)

    def off(self, kind: EventKind, callback: Listener = None) -> None:
        """Unsubscribe from an event kind"""
        if callback is None:
            self._listeners.pop(kind, None)
            self._once_listeners.pop(kind, None)
            return
        if kind in self._listeners:
            self._listeners[kind] = [cb for cb in self._listeners[kind] if cb != callback]
        if kind in self._once_listeners:
            self._once_listeners[kind] = [cb for cb in self._once_listeners[kind] if cb != callback]

    def emit(self, event: Event) -> bool:
        """Deliver an event; returns True if any listener asked to stop"""
        stop = False
        for callback in self._listeners.get(event.kind, []):
            try:
                stop = bool(callback(event)) or stop
            except Exception:
                logger.exception("Error in event listener for %s", event.kind.value)

        once = self._once_listeners.pop(event.kind, [])
        for callback in once:
            try:
                stop = bool(callback(event)) or stop
            except Exception:
                logger.exception("Error in once listener for %s", event.kind.value)
        return stop

    def clear(self) -> None:
        """Remove all listeners"""
        self._listeners.clear()
        self._once_listeners.clear()
