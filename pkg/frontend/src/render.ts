// Immediate-mode canvas rendering: each state frame is drawn from scratch, so
// the picture is a pure function of the last snapshot. World coordinates are
// mapped to the canvas by a uniform scale; the server never sends world
// dimensions, so the view carries them.

import { isStateFrame, ResultFrame, StateFrame } from './protocol.js'

/** Structural subset of CanvasRenderingContext2D used here; a recording fake
 * satisfies it in tests. */
export interface Draw2D {
    fillStyle: string | CanvasGradient | CanvasPattern
    strokeStyle: string | CanvasGradient | CanvasPattern
    lineWidth: number
    font: string
    textAlign: string
    beginPath(): void
    moveTo(x: number, y: number): void
    lineTo(x: number, y: number): void
    closePath(): void
    fill(): void
    stroke(): void
    arc(x: number, y: number, radius: number, start: number, end: number): void
    fillRect(x: number, y: number, w: number, h: number): void
    fillText(text: string, x: number, y: number): void
}

export interface ViewConfig {
    canvasWidth: number
    canvasHeight: number
    worldWidth: number
    worldHeight: number
}

export interface RenderSummary {
    holes: number
    missiles: number
    ships: number
    resource: number
}

export const SHIP_COLORS = ['#4f8fde', '#4fae6a']   // player 1 blue, player 2 green
const BACKGROUND = '#10141c'
const HOLE_FILL = '#000000'
const HOLE_RING = '#6a5acd'
const SAFE_RING = '#3f6f4f'
const RESOURCE_FILL = '#e0a838'
const HUD_COLOR = '#d8dee8'
const SHIP_RADIUS = 10   // display size; matches the default collision radius

type Logger = (message: string) => void

function scaleOf(view: ViewConfig): number {
    return Math.min(view.canvasWidth / view.worldWidth,
                    view.canvasHeight / view.worldHeight)
}

function drawCircle(ctx: Draw2D, x: number, y: number, radius: number,
                    fill: string | null, ring: string | null): void {
    ctx.beginPath()
    ctx.arc(x, y, Math.max(radius, 1), 0, Math.PI * 2)
    if (fill !== null) {
        ctx.fillStyle = fill
        ctx.fill()
    }
    if (ring !== null) {
        ctx.strokeStyle = ring
        ctx.stroke()
    }
}

function drawShip(ctx: Draw2D, x: number, y: number, heading: number,
                  radius: number, color: string): void {
    // oriented quadrilateral: nose, port wing, tail notch, starboard wing
    const wing = 2.5   // radians off the nose
    const points: Array<[number, number]> = [
        [x + radius * Math.cos(heading), y + radius * Math.sin(heading)],
        [x + radius * Math.cos(heading + wing), y + radius * Math.sin(heading + wing)],
        [x - 0.4 * radius * Math.cos(heading), y - 0.4 * radius * Math.sin(heading)],
        [x + radius * Math.cos(heading - wing), y + radius * Math.sin(heading - wing)],
    ]
    ctx.beginPath()
    ctx.moveTo(points[0][0], points[0][1])
    for (const [px, py] of points.slice(1)) ctx.lineTo(px, py)
    ctx.closePath()
    ctx.fillStyle = color
    ctx.fill()
}

/** Draw one snapshot. Malformed frames are skipped: the error is logged and
 * null comes back, leaving the previous picture in place. */
export function renderState(ctx: Draw2D, view: ViewConfig, frame: unknown,
                            log: Logger = (m) => console.error(m)): RenderSummary | null {
    if (!isStateFrame(frame)) {
        log('skipping malformed state frame')
        return null
    }
    const k = scaleOf(view)
    ctx.fillStyle = BACKGROUND
    ctx.fillRect(0, 0, view.canvasWidth, view.canvasHeight)

    const summary: RenderSummary = { holes: 0, missiles: 0, ships: 0, resource: 0 }

    ctx.lineWidth = 1
    for (const hole of frame.blackHoles) {
        drawCircle(ctx, hole.x * k, hole.y * k, hole.radius * k, HOLE_FILL, HOLE_RING)
        if (hole.safeZone > 0) {
            drawCircle(ctx, hole.x * k, hole.y * k, hole.safeZone * k, null, SAFE_RING)
        }
        summary.holes += 1
    }

    if (frame.resource !== null) {
        drawCircle(ctx, frame.resource.x * k, frame.resource.y * k, 6 * k,
                   RESOURCE_FILL, null)
        summary.resource = 1
    }

    for (const missile of frame.missiles) {
        const color = SHIP_COLORS[missile.owner === 1 ? 0 : 1]
        drawCircle(ctx, missile.x * k, missile.y * k, missile.radius * k, color, null)
        summary.missiles += 1
    }

    frame.ships.forEach((ship, i) => {
        drawShip(ctx, ship.x * k, ship.y * k, ship.heading, SHIP_RADIUS * k,
                 SHIP_COLORS[i])
        summary.ships += 1
    })

    ctx.fillStyle = HUD_COLOR
    ctx.font = '13px monospace'
    ctx.textAlign = 'left'
    const hud = hudLines(frame)
    hud.forEach((line, i) => ctx.fillText(line, 8, 16 + 15 * i))
    return summary
}

export function hudLines(frame: StateFrame): string[] {
    const row = (i: number) =>
        `P${i + 1}  score ${frame.scores[i]}  lives ${frame.lives[i]}` +
        `  missiles ${frame.missilesLeft[i]}`
    return [row(0), row(1), `tick ${frame.tick}`]
}

export function resultText(frame: ResultFrame): string {
    return frame.winner === 0 ? 'Draw' : `Player ${frame.winner} wins`
}

/** End screen: dim the board and announce the outcome. */
export function renderResult(ctx: Draw2D, view: ViewConfig, frame: ResultFrame): string {
    ctx.fillStyle = 'rgba(8, 10, 14, 0.75)'
    ctx.fillRect(0, 0, view.canvasWidth, view.canvasHeight)
    ctx.fillStyle = HUD_COLOR
    ctx.font = '28px monospace'
    ctx.textAlign = 'center'
    const text = resultText(frame)
    ctx.fillText(text, view.canvasWidth / 2, view.canvasHeight / 2)
    return text
}
