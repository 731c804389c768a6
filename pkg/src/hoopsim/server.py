"""Live human-play bridge: one websocket client controls one player while the
tick loop runs at a configured real-time pace.

The engine never blocks on the socket. When the human's player is pollable
with no queued input it idles, so a silent or absent client leaves the match
bit-identical to an unconnected run. Backpressure drops the oldest state
frames, never acks or the end message.
"""

from __future__ import annotations

import asyncio
import collections
import logging

from .env import AgentHandle, ControllerKind, MaskMode, PollEntry, action_mask
from .observations import build_local
from .sim import (
    BOT_DIFFICULTIES,
    BotLevel,
    ConfigError,
    MatchConfig,
    Phase,
    Role,
    Team,
    bot_policy,
    legal_actions,
    new_match,
    scene_of,
    tick,
)
from .sim.bots import apply_bot_shooting
from .wire import (
    encode_ack,
    encode_end,
    encode_error,
    encode_hello,
    encode_state,
    marshal,
    unmarshal,
)

log = logging.getLogger("hoopsim.server")


class HumanSession:
    """One match with one human-controlled player; everyone else is a bot or
    a checkpoint policy. Transport-independent: advance_tick() returns the
    messages to stream."""

    def __init__(self, config: MatchConfig, human_role: Role, seed: int,
                 teammates: BotLevel = BotLevel.MEDIUM,
                 opponents: BotLevel | None = BotLevel.MEDIUM,
                 away_policy=None, speed: float = 10.0):
        if human_role not in config.home_roles:
            raise ConfigError(f"human role {human_role.value} is not on the "
                              f"home roster {[r.value for r in config.home_roles]}")
        self.config = config
        self.speed = speed
        self.state = new_match(config, seed)
        self.human_pid = next(p.pid for p in self.state.players
                              if p.team is Team.HOME and p.role is human_role)
        self.teammate_level = teammates
        self.opponent_level = opponents
        self.away_policy = away_policy
        for p in self.state.players:
            if p.pid == self.human_pid:
                continue
            if p.team is Team.HOME:
                apply = teammates
            else:
                apply = opponents
            if apply is not None:
                from .sim.entities import scale_shooting

                p.attrs = scale_shooting(p.attrs,
                                         BOT_DIFFICULTIES[apply].shoot_rate_mult)
        self.pending_action: int | None = None
        self.event_log = []
        self.done = False

    # -- input ----------------------------------------------------------------

    def submit_action(self, action_id: int) -> dict:
        """Queue a human action; returns the ack. Later inputs overwrite
        earlier unapplied ones."""
        if self.done:
            return encode_ack(action_id, "rejected", "match over")
        human = self.state.players[self.human_pid]
        if human.remaining_ticks > 0:
            self.pending_action = action_id
            return encode_ack(action_id, "queued")
        if action_id in legal_actions(self.state, self.human_pid):
            self.pending_action = action_id
            return encode_ack(action_id, "accepted")
        return encode_ack(action_id, "rejected", "illegal")

    # -- tick -----------------------------------------------------------------

    def _policy_entry(self, pid: int) -> PollEntry:
        return PollEntry(
            handle=AgentHandle(pid, ControllerKind.LEARNER),
            observation=build_local(self.state, pid),
            mask=action_mask(self.state, pid, MaskMode.FULL_GAME),
            scene=scene_of(self.state, pid))

    def advance_tick(self) -> list[dict]:
        """Run one tick; returns the messages to send (state, maybe errors,
        maybe end)."""
        if self.done:
            return []
        state = self.state
        msgs: list[dict] = []
        starts: dict[int, int] = {}
        for pid in state.pollable_ids():
            p = state.players[pid]
            if pid == self.human_pid:
                aid = self.pending_action
                self.pending_action = None
                if aid is None:
                    aid = state.catalog.idle_id
                elif aid not in legal_actions(state, pid):
                    msgs.append(encode_error(
                        f"queued action {aid} is no longer legal; idling"))
                    aid = state.catalog.idle_id
                starts[pid] = aid
            elif p.team is Team.AWAY and self.away_policy is not None:
                starts[pid] = self.away_policy(self._policy_entry(pid))
            else:
                level = (self.teammate_level if p.team is Team.HOME
                         else self.opponent_level)
                starts[pid] = bot_policy(state, pid, BOT_DIFFICULTIES[level],
                                         state.rng)
        _, events = tick(state, starts)
        self.event_log.extend(events)
        msgs.append(encode_state(state, self.human_pid))
        if state.phase is Phase.OVER:
            self.done = True
            msgs.append(encode_end(state))
        return msgs

    def run_headless(self) -> None:
        """Drive the match to completion without a transport (used to prove
        client-independence)."""
        while not self.done:
            self.advance_tick()


class _Outbox:
    """Two-lane outbox: control frames (hello/ack/error/end) are never
    dropped; state frames fall off the front under backpressure."""

    def __init__(self, max_states: int = 64):
        self.states = collections.deque(maxlen=max_states)
        self.control = collections.deque()
        self._wakeup = asyncio.Event()

    def put(self, msg: dict) -> None:
        if msg["type"] == "state":
            self.states.append(msg)
        else:
            self.control.append(msg)
        self._wakeup.set()

    async def get(self) -> dict:
        while not self.control and not self.states:
            self._wakeup.clear()
            await self._wakeup.wait()
        return self.control.popleft() if self.control else self.states.popleft()


class BridgeServer:
    def __init__(self, session: HumanSession, host: str = "127.0.0.1",
                 port: int = 8765):
        self.session = session
        self.host = host
        self.port = port
        self.client = None
        self.outbox: _Outbox | None = None
        self._finished = asyncio.Event()

    async def _handle_client(self, websocket) -> None:
        if self.client is not None:
            await websocket.send(marshal(encode_error("session already has a "
                                                      "client")))
            await websocket.close()
            return
        self.client = websocket
        self.outbox = _Outbox()
        self.outbox.put(encode_hello(self.session.state,
                                     self.session.human_pid,
                                     self.session.speed))
        writer = asyncio.create_task(self._writer(websocket))
        try:
            async for raw in websocket:
                try:
                    msg = unmarshal(raw)
                except ValueError as e:
                    self.outbox.put(encode_error(str(e)))
                    continue
                if msg["type"] == "action":
                    action = msg.get("action")
                    if not isinstance(action, int):
                        self.outbox.put(encode_error("action must carry an "
                                                     "integer id"))
                        continue
                    self.outbox.put(self.session.submit_action(action))
                else:
                    self.outbox.put(encode_error(
                        f"unexpected client message type {msg['type']!r}"))
        except Exception:  # connection dropped
            pass
        finally:
            writer.cancel()
            self.client = None
            self.outbox = None

    async def _writer(self, websocket) -> None:
        try:
            while True:
                msg = await self.outbox.get()
                await websocket.send(marshal(msg))
        except asyncio.CancelledError:
            pass
        except Exception:
            pass

    async def _tick_loop(self) -> None:
        interval = 0.0 if self.session.speed <= 0 else 1.0 / self.session.speed
        while not self.session.done:
            msgs = self.session.advance_tick()
            if self.outbox is not None:
                for m in msgs:
                    self.outbox.put(m)
            if interval:
                await asyncio.sleep(interval)
            else:
                await asyncio.sleep(0)
        # Give the writer a moment to flush the end frame.
        await asyncio.sleep(0.05)
        self._finished.set()

    async def run(self) -> None:
        import websockets

        async with websockets.serve(self._handle_client, self.host, self.port):
            log.info("serving human session on ws://%s:%d", self.host, self.port)
            await self._tick_loop()


def serve_human(role: str, vs: str, port: int, speed: float,
                config_path: str | None = None, seed: int = 0,
                host: str = "127.0.0.1") -> HumanSession:
    """CLI entry: build the session and serve it until the match ends."""
    if config_path:
        import yaml

        with open(config_path) as fh:
            data = yaml.safe_load(fh) or {}
        config = MatchConfig.from_dict(data.get("match", {}))
    else:
        config = MatchConfig()
    try:
        human_role = Role(role)
    except ValueError:
        raise ConfigError(f"unknown role {role!r}")

    away_policy = None
    opponents: BotLevel | None = None
    if vs.startswith("checkpoint:"):
        from .checkpoint import trainer_from_checkpoint

        trainer = trainer_from_checkpoint(vs.split(":", 1)[1])
        away_policy = trainer.greedy_policy()
    else:
        try:
            opponents = BotLevel(vs)
        except ValueError:
            raise ConfigError(f"unknown opponent {vs!r}; use easy|medium|hard"
                              f"|checkpoint:<path>")

    session = HumanSession(config, human_role, seed=seed, opponents=opponents,
                           away_policy=away_policy, speed=speed)
    server = BridgeServer(session, host=host, port=port)
    asyncio.run(server.run())
    return session
