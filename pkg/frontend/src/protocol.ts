// Wire protocol of the play-test server: typed frames plus shape validation.
// The server is authoritative; anything that fails validation here is dropped
// by the caller rather than guessed at.

export type Turn = -1 | 0 | 1

export interface ActionFrame {
    type: 'action'
    turn: Turn
    thrust: boolean
    shoot: boolean
}

export interface StartFrame {
    type: 'start'
    genome: number[]
    humanSide: 1 | 2
    enemy?: number
    seed?: number
}

export interface ResumeFrame {
    type: 'resume'
    sessionId: string
}

export interface ShipView {
    x: number
    y: number
    vx: number
    vy: number
    heading: number
}

export interface MissileView {
    x: number
    y: number
    radius: number
    kind: number
    owner: number
}

export interface HoleView {
    x: number
    y: number
    radius: number
    safeZone: number
}

export interface StateFrame {
    type: 'state'
    tick: number
    ships: ShipView[]
    missiles: MissileView[]
    blackHoles: HoleView[]
    resource: { x: number; y: number } | null
    scores: number[]
    lives: number[]
    missilesLeft: number[]
}

export interface ResultFrame {
    type: 'result'
    winner: 0 | 1 | 2
}

export interface ErrorFrame {
    type: 'error'
    message: string
}

export interface SessionFrame {
    type: 'session'
    id: string
}

export type ServerFrame = StateFrame | ResultFrame | ErrorFrame | SessionFrame

function isNum(v: unknown): v is number {
    return typeof v === 'number' && Number.isFinite(v)
}

function isNumArray(v: unknown, length: number): v is number[] {
    return Array.isArray(v) && v.length === length && v.every(isNum)
}

function isShip(v: unknown): v is ShipView {
    if (typeof v !== 'object' || v === null) return false
    const s = v as Record<string, unknown>
    return isNum(s.x) && isNum(s.y) && isNum(s.vx) && isNum(s.vy) && isNum(s.heading)
}

function isMissile(v: unknown): v is MissileView {
    if (typeof v !== 'object' || v === null) return false
    const m = v as Record<string, unknown>
    return isNum(m.x) && isNum(m.y) && isNum(m.radius) && isNum(m.kind) && isNum(m.owner)
}

function isHole(v: unknown): v is HoleView {
    if (typeof v !== 'object' || v === null) return false
    const h = v as Record<string, unknown>
    return isNum(h.x) && isNum(h.y) && isNum(h.radius) && isNum(h.safeZone)
}

export function isStateFrame(frame: unknown): frame is StateFrame {
    if (typeof frame !== 'object' || frame === null) return false
    const f = frame as Record<string, unknown>
    if (f.type !== 'state' || !isNum(f.tick)) return false
    if (!Array.isArray(f.ships) || f.ships.length !== 2 || !f.ships.every(isShip)) return false
    if (!Array.isArray(f.missiles) || !f.missiles.every(isMissile)) return false
    if (!Array.isArray(f.blackHoles) || !f.blackHoles.every(isHole)) return false
    const res = f.resource
    if (res !== null) {
        if (typeof res !== 'object') return false
        const r = res as Record<string, unknown>
        if (!isNum(r.x) || !isNum(r.y)) return false
    }
    return isNumArray(f.scores, 2) && isNumArray(f.lives, 2) && isNumArray(f.missilesLeft, 2)
}

export function parseServerFrame(raw: string): ServerFrame | null {
    let msg: unknown
    try {
        msg = JSON.parse(raw)
    } catch {
        return null
    }
    if (typeof msg !== 'object' || msg === null) return null
    const frame = msg as Record<string, unknown>
    switch (frame.type) {
        case 'state':
            return isStateFrame(frame) ? frame : null
        case 'result':
            return frame.winner === 0 || frame.winner === 1 || frame.winner === 2
                ? (frame as unknown as ResultFrame)
                : null
        case 'error':
            return typeof frame.message === 'string' ? (frame as unknown as ErrorFrame) : null
        case 'session':
            return typeof frame.id === 'string' ? (frame as unknown as SessionFrame) : null
        default:
            return null
    }
}

export function buildStartFrame(
    genome: number[], humanSide: 1 | 2, seed?: number, enemy?: number,
): StartFrame {
    const frame: StartFrame = { type: 'start', genome, humanSide }
    if (seed !== undefined) frame.seed = seed
    if (enemy !== undefined) frame.enemy = enemy
    return frame
}
